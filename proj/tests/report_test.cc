/* Copyright 2026 The detdiag Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "detdiag/analysis.h"
#include "detdiag/errors.h"
#include "detdiag/fpviz.h"
#include "detdiag/io.h"
#include "detdiag/report.h"
#include "detdiag/synth.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace detdiag {
namespace {

using nlohmann::json;
using testing::CountOccurrences;
using testing::Det;
using testing::Gt;
using testing::SvgMetadata;
using testing::TempDir;

AnalysisConfig SingleThread() {
  AnalysisConfig c;
  c.threads = 1;
  return c;
}

AnalysisReport AnalyzeSynthetic(const SyntheticData& data,
                                const AnalysisConfig& config = SingleThread()) {
  return Analyze(data.dataset,
                 DetectionSet(data.detector, data.detections, data.dataset),
                 config);
}

SyntheticData Mixed(std::uint64_t seed) {
  SynthOptions o = SynthOptions::ForProfile(SynthProfile::kJittered, seed);
  o.confuse_rate = 0.2;
  o.bg_per_image = 1;
  return GenerateSynthetic(o);
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

TEST(AnalyzeTest, CountsMatchPlantedManifest) {
  for (SynthProfile p : {SynthProfile::kPerfect, SynthProfile::kJittered,
                         SynthProfile::kConfused, SynthProfile::kNoisyBg}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const SyntheticData data = GenerateSynthetic(SynthOptions::ForProfile(p, seed));
      const AnalysisReport r = AnalyzeSynthetic(data);
      std::map<std::string, std::size_t> planted;
      for (const auto& v : data.manifest) ++planted[v.verdict];
      std::size_t tp = 0, ignored = 0;
      for (const auto& c : r.categories) {
        tp += c.tp;
        ignored += c.ignored;
      }
      EXPECT_EQ(tp, planted["TP"]);
      EXPECT_EQ(ignored, planted["Ignored"]);
      EXPECT_EQ(r.fp_counts[FpType::kLoc], planted["FP:Loc"]);
      EXPECT_EQ(r.fp_counts[FpType::kSim], planted["FP:Sim"]);
      EXPECT_EQ(r.fp_counts[FpType::kOth], planted["FP:Oth"]);
      EXPECT_EQ(r.fp_counts[FpType::kBg], planted["FP:BG"]);
      EXPECT_EQ(r.TotalFp(), r.fp_counts.total());
    }
  }
}

TEST(AnalyzeTest, EmptyDetections) {
  const Dataset ds = testing::MakeDataset(
      {Gt(1, 1, "cat", {0, 0, 10, 10}), Gt(2, 1, "dog", {50, 0, 10, 20})},
      {"cat", "dog", "cow"});
  const AnalysisReport r = Analyze(ds, DetectionSet("none", {}, ds), SingleThread());
  EXPECT_EQ(r.TotalFp(), 0u);
  for (const auto& c : r.categories) {
    EXPECT_TRUE(c.fp_distribution.empty());
    EXPECT_EQ(c.fp_counts.total(), 0u);
  }
  EXPECT_EQ(r.FindCategory("cat")->ap, 0.0);
  EXPECT_EQ(r.FindCategory("cat")->normalized_ap, 0.0);
  EXPECT_FALSE(r.FindCategory("cow")->ap);
  EXPECT_FALSE(r.FindCategory("cow")->normalized_ap);
  EXPECT_TRUE(r.fp_distribution.empty());
  const json j = ReportToJson(r);
  EXPECT_TRUE(j["categories"][2]["ap"].is_null());
  EXPECT_EQ(j["summary"]["fp"], 0);
}

TEST(AnalyzeTest, PerfectDetectorScoresOne) {
  const SyntheticData data =
      GenerateSynthetic(SynthOptions::ForProfile(SynthProfile::kPerfect, 9));
  const AnalysisReport r = AnalyzeSynthetic(data);
  for (const auto& c : r.categories) {
    if (c.n_pos == 0) continue;
    EXPECT_EQ(c.ap, 1.0) << c.category;
    EXPECT_EQ(c.normalized_ap, 1.0) << c.category;
    for (const auto& row : c.sensitivity) EXPECT_EQ(row.sensitivity, 0.0);
  }
  for (const auto& row : r.sensitivity) EXPECT_EQ(row.sensitivity, 0.0);
  EXPECT_EQ(r.MeanAp(), 1.0);
}

TEST(AnalyzeTest, RejectsBadConfig) {
  const SyntheticData data = Mixed(1);
  AnalysisConfig c = SingleThread();
  c.tp_iou = 0.05;
  EXPECT_THROW(AnalyzeSynthetic(data, c), DomainError);
  c = SingleThread();
  c.n_ref = 0.0;
  EXPECT_THROW(AnalyzeSynthetic(data, c), DomainError);
  c = SingleThread();
  c.schedule = std::vector<std::size_t>{5, 5};
  EXPECT_THROW(AnalyzeSynthetic(data, c), ScheduleError);
}

TEST(AnalyzeTest, ExcludeDuplicatesKeepsThemOutOfTaxonomy) {
  const Dataset ds = testing::MakeDataset({Gt(1, 1, "cat", {0, 0, 10, 10})}, {"cat"});
  const std::vector<Detection> dets = {Det(1, 1, "cat", {0, 0, 10, 10}, 0.9),
                                       Det(2, 1, "cat", {0, 0, 10, 10}, 0.8)};
  AnalysisConfig c = SingleThread();
  const AnalysisReport with = Analyze(ds, DetectionSet("d", dets, ds), c);
  EXPECT_EQ(with.fp_counts[FpType::kLoc], 1u);
  EXPECT_EQ(with.FindCategory("cat")->duplicates, 1u);
  c.exclude_duplicates = true;
  const AnalysisReport without = Analyze(ds, DetectionSet("d", dets, ds), c);
  EXPECT_EQ(without.fp_counts.total(), 0u);
  EXPECT_EQ(without.FindCategory("cat")->fp, 1u);
  EXPECT_EQ(without.FindCategory("cat")->ap, with.FindCategory("cat")->ap);
}

TEST(AnalyzeTest, WorkerCountDoesNotChangeOutput) {
  const SyntheticData data = Mixed(4);
  AnalysisConfig one = SingleThread();
  AnalysisConfig many = SingleThread();
  many.threads = 7;
  EXPECT_EQ(ReportToJson(AnalyzeSynthetic(data, one)).dump(),
            ReportToJson(AnalyzeSynthetic(data, many)).dump());
}

TEST(ReportTest, CsvAgreesWithJson) {
  const AnalysisReport r = AnalyzeSynthetic(Mixed(5));
  const json j = ReportToJson(r);
  const auto rows = ParseCsv(FpTypesCsv(r));
  ASSERT_EQ(rows.front(),
            (std::vector<std::string>{"category", "Loc", "Sim", "Oth", "BG"}));
  ASSERT_EQ(rows.size(), r.categories.size() + 1);
  std::map<std::string, long long> sums;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t col = 1; col < 5; ++col) sums[rows[0][col]] += std::stoll(rows[i][col]);
  }
  for (const auto& [type, sum] : sums) {
    EXPECT_EQ(sum, j["summary"]["fp_types"][type].get<long long>()) << type;
  }

  const auto sens = ParseCsv(SensitivityCsv(r));
  EXPECT_EQ(sens.front(),
            (std::vector<std::string>{"characteristic", "subset", "normalized_ap",
                                      "max", "min", "sensitivity"}));
  std::size_t expected_rows = 1;
  for (const auto& row : j["sensitivity"]) expected_rows += row["subsets"].size();
  EXPECT_EQ(sens.size(), expected_rows);
  for (std::size_t i = 1; i < sens.size(); ++i) {
    const auto c = ParseCharacteristic(sens[i][0]);
    ASSERT_TRUE(c);
    const SensitivityRow* row = r.FindSensitivity(*c);
    ASSERT_NE(row, nullptr);
    EXPECT_DOUBLE_EQ(std::stod(sens[i][5]), row->sensitivity);
  }

  const auto records = ParseCsv(FpRecordsCsv(r));
  EXPECT_EQ(records.size(), r.TotalFp() + 1);
}

TEST(ReportTest, SvgMetadataAgreesWithJson) {
  const AnalysisReport r = AnalyzeSynthetic(Mixed(6));
  const json j = ReportToJson(r);
  const json dist = SvgMetadata(FpDistributionSvg(r));
  ASSERT_FALSE(dist.is_null());
  EXPECT_EQ(dist["fp_distribution"]["all"], j["fp_distribution"]);
  for (const auto& c : j["categories"]) {
    EXPECT_EQ(dist["fp_distribution"]["categories"][c["category"].get<std::string>()],
              c["fp_distribution"]);
  }
  const json sens = SvgMetadata(SensitivitySvg(r));
  ASSERT_FALSE(sens.is_null());
  EXPECT_EQ(sens["sensitivity"], j["sensitivity"]);
  EXPECT_EQ(sens["detector"], j["detector"]);
}

TEST(ReportTest, OutputsAreDeterministic) {
  const SyntheticData data = Mixed(7);
  TempDir a, b;
  WriteAnalysisOutputs(AnalyzeSynthetic(data), a.path());
  WriteAnalysisOutputs(AnalyzeSynthetic(data), b.path());
  for (const char* name : {"report.json", "fp_types.csv", "sensitivity.csv",
                           "fp_records.csv", "fp_distribution.svg",
                           "sensitivity.svg"}) {
    EXPECT_EQ(ReadFile(a / name), ReadFile(b / name)) << name;
  }
}

TEST(ReportTest, FormatNumberRoundTrips) {
  EXPECT_EQ(FormatNumber(0.5), "0.5");
  EXPECT_EQ(FormatNumber(1.0), "1");
  EXPECT_EQ(std::stod(FormatNumber(2.0 / 3.0)), 2.0 / 3.0);
}

TEST(CompareTest, IdenticalReportsGiveZeroDeltas) {
  const AnalysisReport r = AnalyzeSynthetic(Mixed(8));
  const ComparisonReport cmp = Compare(r, r);
  EXPECT_EQ(cmp.total_fp, 0);
  EXPECT_EQ(cmp.initial_loc_fraction, 0.0);
  EXPECT_EQ(cmp.mean_normalized_ap, 0.0);
  for (const auto& d : cmp.categories) EXPECT_EQ(d.fp, 0);
  for (const auto& d : cmp.sensitivity) EXPECT_EQ(d.sensitivity, 0.0);
}

TEST(CompareTest, RemovingBackgroundErrors) {
  const SyntheticData data = Mixed(10);
  std::size_t bg = 0;
  std::vector<Detection> kept;
  for (std::size_t i = 0; i < data.detections.size(); ++i) {
    const auto& d = data.detections[i];
    const auto it = std::find_if(data.manifest.begin(), data.manifest.end(),
                                 [&](const auto& v) { return v.detection_id == d.id; });
    if (it != data.manifest.end() && it->verdict == "FP:BG") {
      ++bg;
      continue;
    }
    kept.push_back(d);
  }
  ASSERT_GT(bg, 0u);
  const AnalysisReport a = AnalyzeSynthetic(data);
  const AnalysisReport b = Analyze(data.dataset, DetectionSet("b", kept, data.dataset),
                                   SingleThread());
  const ComparisonReport cmp = Compare(a, b);
  EXPECT_EQ(cmp.total_fp, -static_cast<long long>(bg));
  EXPECT_EQ(b.fp_counts[FpType::kBg], 0u);
  EXPECT_GE(*cmp.mean_normalized_ap, 0.0);
  EXPECT_EQ(Compare(b, a).total_fp, -cmp.total_fp);
}

TEST(CompareTest, MonotoneScoreTransformChangesNothing) {
  const SyntheticData data = Mixed(11);
  std::vector<Detection> halved = data.detections;
  for (auto& d : halved) d.score /= 2;
  const AnalysisReport a = AnalyzeSynthetic(data);
  const AnalysisReport b =
      Analyze(data.dataset, DetectionSet(data.detector, halved, data.dataset),
              SingleThread());
  const ComparisonReport cmp = Compare(a, b);
  EXPECT_EQ(cmp.total_fp, 0);
  EXPECT_EQ(cmp.mean_normalized_ap, 0.0);
  for (const auto& d : cmp.categories) {
    if (d.ap) EXPECT_EQ(*d.ap, 0.0);
  }
}

TEST(CompareTest, WritesBothAnalyses) {
  const AnalysisReport r = AnalyzeSynthetic(Mixed(12));
  TempDir dir;
  WriteComparisonOutputs(Compare(r, r), dir.path());
  EXPECT_TRUE(std::filesystem::exists(dir / "A/report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "B/report.json"));
  const json cmp = json::parse(ReadFile(dir / "comparison.json"));
  EXPECT_EQ(cmp["delta"]["fp"], 0);
  EXPECT_NE(ReadFile(dir / "comparison.svg").find("<svg"), std::string::npos);
}

TEST(FpVizTest, StrictScoreThresholdAndCaptions) {
  const Dataset ds = testing::MakeDataset(
      {Gt(1, 1, "cat", {0, 0, 100, 100}), Gt(2, 2, "dog", {0, 0, 50, 50})},
      {"cat", "dog"}, {}, 2);
  const std::vector<Detection> dets = {
      Det(1, 1, "cat", {300, 300, 20, 20}, 0.31),
      Det(2, 1, "cat", {400, 300, 20, 20}, 0.30),
      Det(3, 1, "cat", {0, 0, 60, 60}, 0.98),
      Det(4, 2, "dog", {0, 0, 50, 50}, 0.9)};
  const AnalysisReport r = Analyze(ds, DetectionSet("d", dets, ds), SingleThread());
  const auto overlays = RenderFpOverlays(ds, r);
  ASSERT_EQ(overlays.size(), 1u);  // image 2 has no false positives
  EXPECT_EQ(overlays[0].num_fps, 2u);
  const std::string& svg = overlays[0].svg;
  EXPECT_EQ(CountOccurrences(svg, "class=\"fp\""), 2u);
  EXPECT_EQ(CountOccurrences(svg, "class=\"gt\""), 1u);
  EXPECT_NE(svg.find("0.98"), std::string::npos);
  EXPECT_NE(svg.find("(Loc)"), std::string::npos);
  EXPECT_NE(svg.find("(BG)"), std::string::npos);
  EXPECT_NE(svg.find("0.31"), std::string::npos);
  EXPECT_EQ(svg.find("0.30"), std::string::npos);

  TempDir dir;
  WriteFpOverlays(overlays, dir.path());
  EXPECT_TRUE(std::filesystem::exists(dir / overlays[0].file_name));
}

TEST(SynthTest, SameSeedSameFiles) {
  const SynthOptions o = SynthOptions::ForProfile(SynthProfile::kConfused, 21);
  TempDir a, b;
  WriteSynthetic(o, GenerateSynthetic(o), a.path());
  WriteSynthetic(o, GenerateSynthetic(o), b.path());
  for (const char* name : {"gt.json", "det.json", "taxonomy.json", "manifest.json"}) {
    EXPECT_EQ(ReadFile(a / name), ReadFile(b / name)) << name;
  }
  const Dataset loaded = LoadDataset(a / "gt.json", a / "taxonomy.json");
  EXPECT_EQ(loaded, GenerateSynthetic(o).dataset);
}

TEST(SynthTest, NoisyBackgroundIsAllBackground) {
  const SyntheticData data =
      GenerateSynthetic(SynthOptions::ForProfile(SynthProfile::kNoisyBg, 2));
  const AnalysisReport r = AnalyzeSynthetic(data);
  EXPECT_GT(r.TotalFp(), 0u);
  EXPECT_EQ(r.fp_counts[FpType::kBg], r.TotalFp());
}

TEST(ConfigTest, FromJson) {
  const AnalysisConfig c = ConfigFromJson(
      json::parse(R"({"tp_iou": 0.7, "n_ref": 12, "ap_mode": "11point",
                      "schedule": [5, 10], "exclude_duplicates": true})"),
      AnalysisConfig{});
  EXPECT_EQ(c.tp_iou, 0.7);
  EXPECT_EQ(c.n_ref, 12.0);
  EXPECT_EQ(c.ap_mode, ApMode::kElevenPoint);
  EXPECT_EQ(c.schedule, (std::vector<std::size_t>{5, 10}));
  EXPECT_TRUE(c.exclude_duplicates);
  EXPECT_THROW(ConfigFromJson(json::parse(R"({"ap_mode": "bogus"})"), {}), ParseError);
  EXPECT_THROW(ConfigFromJson(json::parse(R"({"tp_iou": "x"})"), {}), ParseError);
  EXPECT_THROW(ConfigFromJson(json::parse(R"({"tp_iou": 1.5})"), {}), DomainError);
  EXPECT_THROW(ConfigFromJson(json::parse("[]"), {}), ParseError);
}

TEST(ConfigTest, ShippedTaxonomyMatchesBuiltIn) {
  const SimilarityTaxonomy shipped = ParseTaxonomy(
      json::parse(ReadFile(std::filesystem::path(DETDIAG_DATA_DIR) /
                           "voc_taxonomy.json")));
  EXPECT_EQ(shipped.groups(), DefaultVocTaxonomy().groups());
  EXPECT_TRUE(shipped.Similar("cat", "dog"));
  EXPECT_FALSE(shipped.Similar("cat", "car"));
  EXPECT_FALSE(shipped.Similar("person", "person"));
}

}  // namespace
}  // namespace detdiag
