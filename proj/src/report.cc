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

#include "detdiag/report.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "detdiag/errors.h"
#include "detdiag/io.h"
#include "detdiag/svg.h"

namespace detdiag {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 4> kFpColors = {"#4e79a7", "#f28e2b",
                                                       "#e15759", "#bab0ac"};

json Optional(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string CsvOptional(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : std::string();
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json CountsToJson(const FpTypeCounts& counts) {
  json j = json::object();
  for (FpType t : kAllFpTypes) j[std::string(FpTypeName(t))] = counts[t];
  return j;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

constexpr double kFpPanelW = 270.0;
constexpr double kFpPanelH = 210.0;

void DrawFpPanel(SvgWriter& svg, double x, double y, std::string_view title,
                 const FpDistributionSeries& series, std::size_t total_fps) {
  constexpr double kLeft = 42.0, kTop = 30.0, kW = 210.0, kH = 130.0;
  svg.BeginGroup(x, y);
  svg.Text(kLeft + kW / 2, 16,
           std::string(title) + " (" + std::to_string(total_fps) + " FPs)",
           "font-size=\"12\" text-anchor=\"middle\"");
  svg.Rect(kLeft, kTop, kW, kH, "fill=\"none\" stroke=\"#333\"");
  for (int pct = 0; pct <= 100; pct += 50) {
    const double py = kTop + kH * (1.0 - pct / 100.0);
    svg.Line(kLeft - 3, py, kLeft, py, "stroke=\"#333\"");
    svg.Text(kLeft - 5, py + 3, std::to_string(pct) + "%",
             "font-size=\"9\" text-anchor=\"end\"");
  }
  if (series.empty()) {
    svg.Text(kLeft + kW / 2, kTop + kH / 2, "no false positives",
             "font-size=\"11\" text-anchor=\"middle\" fill=\"#666\"");
    svg.EndGroup();
    return;
  }

  const double lo = std::log(static_cast<double>(series.front().k));
  const double hi = std::log(static_cast<double>(series.back().k));
  auto px = [&](std::size_t i) {
    if (series.size() == 1) return i == 0 ? kLeft : kLeft + kW;
    return kLeft + kW * (std::log(static_cast<double>(series[i].k)) - lo) /
                       (hi - lo);
  };
  // A single entry is drawn as a flat band across the panel.
  const std::size_t n = series.size() == 1 ? 2 : series.size();
  auto entry = [&](std::size_t i) -> const FpDistributionEntry& {
    return series[std::min(i, series.size() - 1)];
  };

  std::vector<double> lower(n, 0.0);
  for (FpType t : kAllFpTypes) {
    std::vector<double> upper(n);
    for (std::size_t i = 0; i < n; ++i) upper[i] = lower[i] + entry(i)[t];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < n; ++i) {
      pts.emplace_back(px(i), kTop + kH * (1.0 - std::min(upper[i], 1.0)));
    }
    for (std::size_t i = n; i-- > 0;) {
      pts.emplace_back(px(i), kTop + kH * (1.0 - std::min(lower[i], 1.0)));
    }
    svg.Polygon(pts, "class=\"fp-area\" data-type=\"" +
                         std::string(FpTypeName(t)) + "\" fill=\"" +
                         std::string(kFpColors[static_cast<int>(t)]) +
                         "\" stroke=\"none\"");
    lower = std::move(upper);
  }
  svg.Text(kLeft, kTop + kH + 13, std::to_string(series.front().k),
           "font-size=\"9\" text-anchor=\"start\"");
  svg.Text(kLeft + kW, kTop + kH + 13, std::to_string(series.back().k),
           "font-size=\"9\" text-anchor=\"end\"");
  svg.Text(kLeft + kW / 2, kTop + kH + 26, "top-ranked false positives (log)",
           "font-size=\"9\" text-anchor=\"middle\"");
  svg.EndGroup();
}

void DrawFpLegend(SvgWriter& svg, double x, double y) {
  for (FpType t : kAllFpTypes) {
    const auto i = static_cast<double>(static_cast<int>(t));
    svg.Rect(x + i * 60, y, 12, 12,
             "fill=\"" + std::string(kFpColors[static_cast<int>(t)]) + "\"");
    svg.Text(x + i * 60 + 16, y + 10, FpTypeName(t), "font-size=\"11\"");
  }
}

constexpr double kSensGroupW = 110.0;
constexpr double kSensLeft = 44.0;
constexpr double kSensW = kSensLeft + 6 * kSensGroupW + 16.0;
constexpr double kSensH = 250.0;

void DrawSensitivityPanel(SvgWriter& svg, double x, double y,
                          std::string_view title,
                          const std::vector<SensitivityRow>& rows) {
  constexpr double kTop = 30.0, kH = 150.0;
  svg.BeginGroup(x, y);
  svg.Text(kSensW / 2, 16, title, "font-size=\"12\" text-anchor=\"middle\"");
  const double plot_w = 6 * kSensGroupW;
  svg.Rect(kSensLeft, kTop, plot_w, kH, "fill=\"none\" stroke=\"#333\"");
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = tick / 4.0;
    const double py = kTop + kH * (1.0 - v);
    svg.Line(kSensLeft - 3, py, kSensLeft, py, "stroke=\"#333\"");
    svg.Text(kSensLeft - 5, py + 3, Fixed(v, 2),
             "font-size=\"9\" text-anchor=\"end\"");
  }
  svg.Text(12, kTop + kH / 2, "normalized AP",
           "font-size=\"9\" text-anchor=\"middle\" transform=\"rotate(-90 12 " +
               Coord(kTop + kH / 2) + ")\"");

  for (std::size_t g = 0; g < 6; ++g) {
    const Characteristic c = kAllCharacteristics[g];
    const double gx = kSensLeft + g * kSensGroupW;
    if (g > 0) {
      svg.Line(gx, kTop, gx, kTop + kH, "stroke=\"#ccc\"");
    }
    svg.Text(gx + kSensGroupW / 2, kTop + kH + 52, CharacteristicName(c),
             "font-size=\"11\" text-anchor=\"middle\"");
    const SensitivityRow* row = nullptr;
    for (const SensitivityRow& r : rows) {
      if (r.characteristic == c) row = &r;
    }
    if (row == nullptr) {
      svg.Text(gx + kSensGroupW / 2, kTop + kH / 2, "n/a",
               "font-size=\"10\" text-anchor=\"middle\" fill=\"#666\"");
      continue;
    }
    auto py = [&](double v) { return kTop + kH * (1.0 - std::clamp(v, 0.0, 1.0)); };
    svg.Line(gx + 4, py(row->max), gx + kSensGroupW - 4, py(row->max),
             "stroke=\"#c00\" stroke-dasharray=\"4,3\"");
    svg.Line(gx + 4, py(row->min), gx + kSensGroupW - 4, py(row->min),
             "stroke=\"#c00\" stroke-dasharray=\"4,3\"");
    svg.Text(gx + kSensGroupW / 2, py(row->max) - 4, Fixed(row->max, 3),
             "font-size=\"9\" text-anchor=\"middle\" fill=\"#c00\"");
    svg.Text(gx + kSensGroupW / 2, py(row->min) + 11, Fixed(row->min, 3),
             "font-size=\"9\" text-anchor=\"middle\" fill=\"#c00\"");
    const std::size_t n = row->subsets.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double sx =
          gx + 12 + (n <= 1 ? (kSensGroupW - 24) / 2
                            : i * (kSensGroupW - 24) / static_cast<double>(n - 1));
      svg.Text(sx, kTop + kH + 14, row->subsets[i],
               "font-size=\"8\" text-anchor=\"end\" transform=\"rotate(-45 " +
                   Coord(sx) + ' ' + Coord(kTop + kH + 14) + ")\"");
      if (!row->values[i]) continue;
      svg.Circle(sx, py(*row->values[i]), 3,
                 row->subsets[i] == kUnlabeled ? "fill=\"#999\""
                                               : "fill=\"#222\"");
    }
    svg.Text(gx + kSensGroupW / 2, kTop + kH + 64,
             "Δ " + Fixed(row->sensitivity, 3),
             "font-size=\"9\" text-anchor=\"middle\"");
  }
  svg.EndGroup();
}

json SeriesPayload(const AnalysisReport& report) {
  json series = json::object();
  series["all"] = SeriesToJson(report.fp_distribution);
  json cats = json::object();
  for (const CategoryReport& c : report.categories) {
    cats[c.category] = SeriesToJson(c.fp_distribution);
  }
  series["categories"] = std::move(cats);
  return {{"detector", report.detector}, {"fp_distribution", std::move(series)}};
}

json SensitivityPayload(const AnalysisReport& report) {
  json rows = json::array();
  for (const SensitivityRow& r : report.sensitivity) {
    rows.push_back(SensitivityRowToJson(r));
  }
  return {{"detector", report.detector}, {"sensitivity", std::move(rows)}};
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string FormatNumber(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

json SeriesToJson(const FpDistributionSeries& series) {
  json arr = json::array();
  for (const FpDistributionEntry& e : series) {
    json j = {{"k", e.k}};
    for (FpType t : kAllFpTypes) j[std::string(FpTypeName(t))] = e[t];
    arr.push_back(std::move(j));
  }
  return arr;
}

json SensitivityRowToJson(const SensitivityRow& row) {
  json subsets = json::array();
  for (std::size_t i = 0; i < row.subsets.size(); ++i) {
    subsets.push_back(
        {{"subset", row.subsets[i]}, {"normalized_ap", Optional(row.values[i])}});
  }
  return {{"characteristic", std::string(CharacteristicName(row.characteristic))},
          {"subsets", std::move(subsets)},
          {"max", row.max},
          {"min", row.min},
          {"sensitivity", row.sensitivity},
          {"categories", row.num_categories}};
}

json ConfigToJson(const AnalysisReport& report) {
  const AnalysisConfig& c = report.config;
  json schedule = nullptr;
  if (c.schedule) schedule = *c.schedule;
  return {{"tp_iou", c.tp_iou},
          {"min_error_iou", kMinErrorIou},
          {"n_ref", report.n_ref},
          {"n_ref_source", c.n_ref ? "user" : "default"},
          {"cuts", c.cuts},
          {"ap_mode", std::string(ApModeName(c.ap_mode))},
          {"schedule", std::move(schedule)},
          {"exclude_duplicates", c.exclude_duplicates}};
}

json ReportToJson(const AnalysisReport& report) {
  std::size_t tp = 0, ignored = 0, duplicates = 0;
  json categories = json::array();
  for (const CategoryReport& c : report.categories) {
    tp += c.tp;
    ignored += c.ignored;
    duplicates += c.duplicates;
    json sens = json::array();
    for (const SensitivityRow& r : c.sensitivity) {
      sens.push_back(SensitivityRowToJson(r));
    }
    categories.push_back({{"category", c.category},
                          {"n_pos", c.n_pos},
                          {"detections", c.num_detections},
                          {"tp", c.tp},
                          {"fp", c.fp},
                          {"ignored", c.ignored},
                          {"duplicates", c.duplicates},
                          {"ap", Optional(c.ap)},
                          {"normalized_ap", Optional(c.normalized_ap)},
                          {"fp_types", CountsToJson(c.fp_counts)},
                          {"fp_distribution", SeriesToJson(c.fp_distribution)},
                          {"sensitivity", std::move(sens)}});
  }
  json sensitivity = json::array();
  for (const SensitivityRow& r : report.sensitivity) {
    sensitivity.push_back(SensitivityRowToJson(r));
  }
  json summary = {{"images", report.num_images},
                  {"objects", report.num_objects},
                  {"positives", report.num_positives},
                  {"detections", report.num_detections},
                  {"tp", tp},
                  {"fp", report.TotalFp()},
                  {"ignored", ignored},
                  {"duplicates", duplicates},
                  {"mean_ap", Optional(report.MeanAp())},
                  {"mean_normalized_ap", Optional(report.MeanNormalizedAp())},
                  {"fp_types", CountsToJson(report.fp_counts)}};
  return {{"detector", report.detector},
          {"config", ConfigToJson(report)},
          {"summary", std::move(summary)},
          {"fp_distribution", SeriesToJson(report.fp_distribution)},
          {"categories", std::move(categories)},
          {"sensitivity", std::move(sensitivity)}};
}

std::string FpTypesCsv(const AnalysisReport& report) {
  std::ostringstream out;
  out << "category,Loc,Sim,Oth,BG\n";
  for (const CategoryReport& c : report.categories) {
    out << CsvField(c.category);
    for (FpType t : kAllFpTypes) out << ',' << c.fp_counts[t];
    out << '\n';
  }
  return out.str();
}

std::string SensitivityCsv(const AnalysisReport& report) {
  std::ostringstream out;
  out << "characteristic,subset,normalized_ap,max,min,sensitivity\n";
  for (const SensitivityRow& r : report.sensitivity) {
    for (std::size_t i = 0; i < r.subsets.size(); ++i) {
      out << CharacteristicName(r.characteristic) << ',' << CsvField(r.subsets[i])
          << ',' << CsvOptional(r.values[i]) << ',' << FormatNumber(r.max) << ','
          << FormatNumber(r.min) << ',' << FormatNumber(r.sensitivity) << '\n';
    }
  }
  return out.str();
}

std::string FpRecordsCsv(const AnalysisReport& report) {
  std::ostringstream out;
  out << "detection_id,image_id,category,score,type,same_class_iou,"
         "similar_class_iou,other_class_iou,duplicate\n";
  for (const FpRecord& r : report.AllFps()) {
    out << CsvField(r.detection_id.str()) << ',' << CsvField(r.image_id.str())
        << ',' << CsvField(r.category) << ',' << FormatNumber(r.score) << ','
        << FpTypeName(r.type) << ',' << FormatNumber(r.evidence.same_class_iou)
        << ',' << FormatNumber(r.evidence.similar_class_iou) << ','
        << FormatNumber(r.evidence.other_class_iou) << ','
        << (r.duplicate ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string FpDistributionSvg(const AnalysisReport& report) {
  constexpr int kColumns = 4;
  const std::size_t panels = report.categories.size() + 1;
  const std::size_t rows = (panels + kColumns - 1) / kColumns;
  SvgWriter svg(kColumns * kFpPanelW, 60 + rows * kFpPanelH);
  svg.Metadata("detdiag-data", SeriesPayload(report).dump());
  svg.Text(10, 20, "False positive types: " + report.detector,
           "font-size=\"14\"");
  DrawFpLegend(svg, 10, 32);
  for (std::size_t p = 0; p < panels; ++p) {
    const double x = static_cast<double>(p % kColumns) * kFpPanelW;
    const double y = 60 + static_cast<double>(p / kColumns) * kFpPanelH;
    if (p == 0) {
      DrawFpPanel(svg, x, y, "all categories", report.fp_distribution,
                  report.fp_counts.total());
    } else {
      const CategoryReport& c = report.categories[p - 1];
      DrawFpPanel(svg, x, y, c.category, c.fp_distribution, c.fp_counts.total());
    }
  }
  return svg.Finish();
}

std::string SensitivitySvg(const AnalysisReport& report) {
  SvgWriter svg(kSensW, kSensH + 10);
  svg.Metadata("detdiag-data", SensitivityPayload(report).dump());
  DrawSensitivityPanel(svg, 0, 4,
                       "Sensitivity to object characteristics: " + report.detector,
                       report.sensitivity);
  return svg.Finish();
}

void WriteAnalysisOutputs(const AnalysisReport& report,
                          const std::filesystem::path& out_dir) {
  WriteFile(out_dir / "report.json", Dump(ReportToJson(report)));
  WriteFile(out_dir / "fp_types.csv", FpTypesCsv(report));
  WriteFile(out_dir / "sensitivity.csv", SensitivityCsv(report));
  WriteFile(out_dir / "fp_records.csv", FpRecordsCsv(report));
  WriteFile(out_dir / "fp_distribution.svg", FpDistributionSvg(report));
  WriteFile(out_dir / "sensitivity.svg", SensitivitySvg(report));
}

json ComparisonToJson(const ComparisonReport& cmp) {
  json categories = json::array();
  for (const CategoryDelta& d : cmp.categories) {
    categories.push_back({{"category", d.category},
                          {"fp", d.fp},
                          {"initial_loc_fraction", Optional(d.initial_loc_fraction)},
                          {"ap", Optional(d.ap)},
                          {"normalized_ap", Optional(d.normalized_ap)}});
  }
  json sensitivity = json::array();
  for (const SensitivityDelta& d : cmp.sensitivity) {
    sensitivity.push_back(
        {{"characteristic", std::string(CharacteristicName(d.characteristic))},
         {"sensitivity", Optional(d.sensitivity)},
         {"max", Optional(d.max)},
         {"min", Optional(d.min)}});
  }
  json deltas = {{"fp", cmp.total_fp},
                 {"initial_loc_fraction", Optional(cmp.initial_loc_fraction)},
                 {"mean_normalized_ap", Optional(cmp.mean_normalized_ap)},
                 {"categories", std::move(categories)},
                 {"sensitivity", std::move(sensitivity)}};
  return {{"a", ReportToJson(cmp.a)},
          {"b", ReportToJson(cmp.b)},
          {"delta", std::move(deltas)}};
}

std::string ComparisonSvg(const ComparisonReport& cmp) {
  constexpr double kRowH = 280.0;
  const double width = kFpPanelW + 30 + kSensW;
  SvgWriter svg(width, 50 + 2 * kRowH);
  json payload = {{"a", SeriesPayload(cmp.a)}, {"b", SeriesPayload(cmp.b)},
                  {"a_sensitivity", SensitivityPayload(cmp.a)},
                  {"b_sensitivity", SensitivityPayload(cmp.b)}};
  svg.Metadata("detdiag-data", payload.dump());
  DrawFpLegend(svg, 10, 12);
  const AnalysisReport* rows[] = {&cmp.a, &cmp.b};
  for (int r = 0; r < 2; ++r) {
    const double y = 40 + r * kRowH;
    const AnalysisReport& rep = *rows[r];
    DrawFpPanel(svg, 0, y, rep.detector, rep.fp_distribution,
                rep.fp_counts.total());
    svg.Line(kFpPanelW + 15, y, kFpPanelW + 15, y + kRowH - 20,
             "stroke=\"#555\" stroke-dasharray=\"6,4\"");
    DrawSensitivityPanel(svg, kFpPanelW + 30, y, rep.detector, rep.sensitivity);
  }
  return svg.Finish();
}

void WriteComparisonOutputs(const ComparisonReport& cmp,
                            const std::filesystem::path& out_dir) {
  WriteAnalysisOutputs(cmp.a, out_dir / "A");
  WriteAnalysisOutputs(cmp.b, out_dir / "B");
  WriteFile(out_dir / "comparison.json", Dump(ComparisonToJson(cmp)));
  WriteFile(out_dir / "comparison.svg", ComparisonSvg(cmp));
}

AnalysisConfig ConfigFromJson(const json& doc, AnalysisConfig base) {
  if (!doc.is_object()) throw ParseError("config: expected an object");
  try {
    if (auto it = doc.find("tp_iou"); it != doc.end()) base.tp_iou = it->get<double>();
    if (auto it = doc.find("n_ref"); it != doc.end() && !it->is_null()) {
      base.n_ref = it->get<double>();
    }
    if (auto it = doc.find("cuts"); it != doc.end()) {
      base.cuts = it->get<std::vector<double>>();
    }
    if (auto it = doc.find("ap_mode"); it != doc.end()) {
      auto mode = ParseApMode(it->get<std::string>());
      if (!mode) throw ParseError("config: ap_mode must be envelope or 11point");
      base.ap_mode = *mode;
    }
    if (auto it = doc.find("schedule"); it != doc.end() && !it->is_null()) {
      base.schedule = it->get<std::vector<std::size_t>>();
    }
    if (auto it = doc.find("exclude_duplicates"); it != doc.end()) {
      base.exclude_duplicates = it->get<bool>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  ValidateConfig(base);
  return base;
}

}  // namespace detdiag
