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

// detdiag: false-positive and sensitivity diagnosis for object detectors.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detdiag/analysis.h"
#include "detdiag/errors.h"
#include "detdiag/fpviz.h"
#include "detdiag/io.h"
#include "detdiag/report.h"
#include "detdiag/synth.h"

namespace {

using namespace detdiag;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

struct AnalysisFlags {
  std::string config_path;
  double tp_iou = kDefaultTpIou;
  double n_ref = 0.0;
  std::vector<double> cuts;
  std::string ap_mode = "envelope";
  std::vector<std::size_t> schedule;
  bool exclude_duplicates = false;

  CLI::Option* tp_iou_opt = nullptr;
  CLI::Option* n_ref_opt = nullptr;
  CLI::Option* cuts_opt = nullptr;
  CLI::Option* ap_mode_opt = nullptr;
  CLI::Option* schedule_opt = nullptr;
  CLI::Option* exclude_opt = nullptr;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file; flags win")
        ->check(CLI::ExistingFile);
    tp_iou_opt = app->add_option("--tp-iou", tp_iou, "IOU needed for a true positive");
    n_ref_opt = app->add_option("--n-ref", n_ref, "reference positives for normalized AP");
    cuts_opt = app->add_option("--cuts", cuts, "size/aspect quantile cuts")
                   ->delimiter(',');
    ap_mode_opt = app->add_option("--ap-mode", ap_mode, "envelope or 11point")
                      ->check(CLI::IsMember({"envelope", "11point"}));
    schedule_opt =
        app->add_option("--schedule", schedule, "FP distribution prefix sizes")
            ->delimiter(',');
    exclude_opt = app->add_flag("--exclude-duplicates", exclude_duplicates,
                                "leave duplicate detections out of the FP taxonomy");
  }

  // Config file first, explicit flags on top.
  AnalysisConfig Resolve() const {
    AnalysisConfig config;
    if (!config_path.empty()) {
      const nlohmann::json doc = [&] {
        try {
          return nlohmann::json::parse(ReadFile(config_path));
        } catch (const nlohmann::json::parse_error& e) {
          throw ParseError(config_path + ": " + e.what());
        }
      }();
      config = ConfigFromJson(doc, config);
    }
    if (tp_iou_opt->count() > 0) config.tp_iou = tp_iou;
    if (n_ref_opt->count() > 0) config.n_ref = n_ref;
    if (cuts_opt->count() > 0) config.cuts = cuts;
    if (ap_mode_opt->count() > 0) config.ap_mode = *ParseApMode(ap_mode);
    if (schedule_opt->count() > 0) config.schedule = schedule;
    if (exclude_opt->count() > 0) config.exclude_duplicates = exclude_duplicates;
    ValidateConfig(config);
    return config;
  }
};

void PrintSummary(const AnalysisReport& r) {
  auto fmt = [](const std::optional<double>& v) {
    return v ? FormatNumber(*v) : std::string("n/a");
  };
  std::cout << r.detector << ": " << r.num_detections << " detections, "
            << r.TotalFp() << " false positives (Loc " << r.fp_counts[FpType::kLoc]
            << ", Sim " << r.fp_counts[FpType::kSim] << ", Oth "
            << r.fp_counts[FpType::kOth] << ", BG " << r.fp_counts[FpType::kBg]
            << "), mAP " << fmt(r.MeanAp()) << ", mean normalized AP "
            << fmt(r.MeanNormalizedAp()) << "\n";
}

int Run(int argc, char** argv) {
  CLI::App app{"Detector false-positive and sensitivity diagnosis"};
  app.require_subcommand(1);

  std::string gt, det, det_a, det_b, taxonomy, out;

  CLI::App* analyze = app.add_subcommand("analyze", "analyze one detector");
  analyze->add_option("--gt", gt, "ground-truth JSON")->required();
  analyze->add_option("--det", det, "detections JSON")->required();
  analyze->add_option("--taxonomy", taxonomy, "similarity taxonomy JSON")->required();
  analyze->add_option("--out", out, "output directory")->required();
  AnalysisFlags analyze_flags;
  analyze_flags.Register(analyze);

  CLI::App* compare = app.add_subcommand("compare", "compare two detectors");
  compare->add_option("--gt", gt, "ground-truth JSON")->required();
  compare->add_option("--det-a", det_a, "detections of detector A")->required();
  compare->add_option("--det-b", det_b, "detections of detector B")->required();
  compare->add_option("--taxonomy", taxonomy, "similarity taxonomy JSON")->required();
  compare->add_option("--out", out, "output directory")->required();
  AnalysisFlags compare_flags;
  compare_flags.Register(compare);

  CLI::App* fpviz = app.add_subcommand("fpviz", "draw false-positive overlays");
  double score_threshold = kDefaultVizThreshold;
  fpviz->add_option("--gt", gt, "ground-truth JSON")->required();
  fpviz->add_option("--det", det, "detections JSON")->required();
  fpviz->add_option("--taxonomy", taxonomy, "similarity taxonomy JSON")->required();
  fpviz->add_option("--score-threshold", score_threshold,
                    "draw false positives scoring strictly above this");
  fpviz->add_option("--out", out, "output directory")->required();
  AnalysisFlags fpviz_flags;
  fpviz_flags.Register(fpviz);

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic fixture");
  std::uint64_t seed = 0;
  std::string profile;
  std::size_t images = 0;
  synth->add_option("--seed", seed, "random seed")->required();
  synth->add_option("--profile", profile, "perfect|jittered|confused|noisy-bg")
      ->required()
      ->check(CLI::IsMember({"perfect", "jittered", "confused", "noisy-bg"}));
  auto* images_opt = synth->add_option("--images", images, "number of images");
  synth->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (analyze->parsed()) {
      const AnalysisConfig config = analyze_flags.Resolve();
      const Dataset dataset = LoadDataset(gt, taxonomy);
      const DetectionSet dets = LoadDetections(det, dataset);
      const AnalysisReport report = Analyze(dataset, dets, config);
      WriteAnalysisOutputs(report, out);
      PrintSummary(report);
    } else if (compare->parsed()) {
      const AnalysisConfig config = compare_flags.Resolve();
      const Dataset dataset = LoadDataset(gt, taxonomy);
      const DetectionSet a = LoadDetections(det_a, dataset);
      const DetectionSet b = LoadDetections(det_b, dataset);
      const ComparisonReport cmp =
          Compare(Analyze(dataset, a, config), Analyze(dataset, b, config));
      WriteComparisonOutputs(cmp, out);
      PrintSummary(cmp.a);
      PrintSummary(cmp.b);
      std::cout << "delta FP " << cmp.total_fp << "\n";
    } else if (fpviz->parsed()) {
      const AnalysisConfig config = fpviz_flags.Resolve();
      const Dataset dataset = LoadDataset(gt, taxonomy);
      const DetectionSet dets = LoadDetections(det, dataset);
      const AnalysisReport report = Analyze(dataset, dets, config);
      const auto overlays = RenderFpOverlays(dataset, report, score_threshold);
      WriteFpOverlays(overlays, out);
      std::size_t boxes = 0;
      for (const FpOverlay& o : overlays) boxes += o.num_fps;
      std::cout << overlays.size() << " overlays, " << boxes
                << " false positives above " << score_threshold << "\n";
    } else if (synth->parsed()) {
      SynthOptions options =
          SynthOptions::ForProfile(*ParseSynthProfile(profile), seed);
      if (images_opt->count() > 0) options.num_images = images;
      const SyntheticData data = GenerateSynthetic(options);
      WriteSynthetic(options, data, out);
      std::cout << data.dataset.objects().size() << " objects, "
                << data.detections.size() << " detections written to " << out
                << "\n";
    }
  } catch (const IoError& e) {
    std::cerr << "detdiag: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "detdiag: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "detdiag: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return Run(argc, argv); }
