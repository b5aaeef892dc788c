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

#include "detdiag/analysis.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "detdiag/errors.h"

namespace detdiag {
namespace {

// Runs fn(0..n-1) on up to `workers` threads. The first exception thrown by
// any task is rethrown after all workers join.
void ParallelFor(std::size_t n, unsigned workers,
                 const std::function<void(std::size_t)>& fn) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

bool RecordBefore(const FpRecord& a, const FpRecord& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.detection_id < b.detection_id;
}

std::vector<std::size_t> ScheduleFor(const AnalysisConfig& config,
                                     std::size_t num_categories,
                                     std::size_t num_fps) {
  if (config.schedule) return ClampSchedule(*config.schedule, num_fps);
  return DefaultSchedule(num_categories, num_fps);
}

FpDistributionSeries DistributionOf(std::span<const FpRecord> fps,
                                    const AnalysisConfig& config,
                                    std::size_t num_categories) {
  std::vector<FpType> types;
  types.reserve(fps.size());
  for (const FpRecord& r : fps) types.push_back(r.type);
  const auto schedule = ScheduleFor(config, num_categories, types.size());
  return BuildFpDistribution(types, schedule);
}

CategoryReport AnalyzeCategory(const Dataset& dataset, std::string category,
                               std::span<const Detection> dets,
                               std::span<const GroundTruthObject> objects,
                               const AnalysisConfig& config, double n_ref) {
  CategoryReport report;
  report.category = std::move(category);
  report.num_detections = dets.size();
  report.n_pos = static_cast<std::size_t>(
      std::count_if(objects.begin(), objects.end(),
                    [](const GroundTruthObject& o) { return !o.ignore; }));

  const MatchResult match = MatchCategory(dets, objects, config.tp_iou);
  report.tp = match.Count(Verdict::kTruePositive);
  report.fp = match.Count(Verdict::kFalsePositive);
  report.ignored = match.Count(Verdict::kIgnored);

  if (report.n_pos > 0) {
    const PrCurve curve = BuildPrCurve(match, report.n_pos);
    report.ap = AveragePrecision(curve, config.ap_mode);
    report.normalized_ap =
        NormalizedAveragePrecision(curve, n_ref, config.ap_mode);
  }

  for (std::size_t d = 0; d < dets.size(); ++d) {
    const DetectionVerdict& v = match.verdicts[d];
    if (v.verdict != Verdict::kFalsePositive) continue;
    if (v.duplicate) ++report.duplicates;
    if (v.duplicate && config.exclude_duplicates) continue;
    FpRecord rec = ClassifyFp(dets[d], dataset);
    rec.duplicate = v.duplicate;
    report.fps.push_back(std::move(rec));
  }
  report.fp_counts = CountFpTypes(report.fps);
  report.fp_distribution =
      DistributionOf(report.fps, config, dataset.categories().size());

  if (report.n_pos > 0) {
    for (Characteristic c : kAllCharacteristics) {
      const CharacteristicBinning binning = BinObjects(objects, c, config.cuts);
      std::vector<std::optional<double>> values;
      for (const std::string& label : binning.labels) {
        values.push_back(
            SubsetNormalizedAp(match, binning, label, n_ref, config.ap_mode));
      }
      if (auto row = SummarizeSensitivity(c, binning.labels, values)) {
        report.sensitivity.push_back(std::move(*row));
      }
    }
  }
  return report;
}

std::optional<double> Mean(const std::vector<CategoryReport>& cats,
                           std::optional<double> CategoryReport::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const CategoryReport& c : cats) {
    if (c.*field) {
      sum += *(c.*field);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> Diff(std::optional<double> a, std::optional<double> b) {
  if (!a || !b) return std::nullopt;
  return *b - *a;
}

}  // namespace

void ValidateConfig(const AnalysisConfig& config) {
  if (!(config.tp_iou >= kMinErrorIou && config.tp_iou <= 1.0)) {
    throw DomainError("tp-iou must lie in [0.1, 1]");
  }
  if (config.n_ref && !(*config.n_ref > 0.0 && std::isfinite(*config.n_ref))) {
    throw DomainError("n-ref must be positive");
  }
  double prev = 0.0;
  for (double c : config.cuts) {
    if (!(c > prev && c < 1.0)) {
      throw DomainError("cuts must be strictly increasing within (0, 1)");
    }
    prev = c;
  }
  if (config.schedule) {
    std::size_t last = 0;
    for (std::size_t k : *config.schedule) {
      if (k == 0 || k <= last) {
        throw ScheduleError("schedule must be strictly increasing from 1");
      }
      last = k;
    }
  }
}

std::optional<double> AnalysisReport::MeanAp() const {
  return Mean(categories, &CategoryReport::ap);
}

std::optional<double> AnalysisReport::MeanNormalizedAp() const {
  return Mean(categories, &CategoryReport::normalized_ap);
}

std::size_t AnalysisReport::TotalFp() const {
  std::size_t n = 0;
  for (const CategoryReport& c : categories) n += c.fp;
  return n;
}

const CategoryReport* AnalysisReport::FindCategory(std::string_view name) const {
  for (const CategoryReport& c : categories) {
    if (c.category == name) return &c;
  }
  return nullptr;
}

const SensitivityRow* AnalysisReport::FindSensitivity(Characteristic c) const {
  for (const SensitivityRow& r : sensitivity) {
    if (r.characteristic == c) return &r;
  }
  return nullptr;
}

std::vector<FpRecord> AnalysisReport::AllFps() const {
  std::vector<FpRecord> all;
  for (const CategoryReport& c : categories) {
    all.insert(all.end(), c.fps.begin(), c.fps.end());
  }
  std::sort(all.begin(), all.end(), RecordBefore);
  return all;
}

unsigned ThreadsFromEnvironment() {
  if (const char* env = std::getenv("DETDIAG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

AnalysisReport Analyze(const Dataset& dataset, const DetectionSet& detections,
                       const AnalysisConfig& config) {
  ValidateConfig(config);
  const auto& categories = dataset.categories();

  AnalysisReport report;
  report.detector = detections.detector();
  report.config = config;
  report.num_images = dataset.images().size();
  report.num_objects = dataset.objects().size();
  report.num_positives = dataset.NumPositives();
  report.num_detections = detections.size();
  report.n_ref = config.n_ref ? *config.n_ref
                              : static_cast<double>(DefaultReferenceCount(
                                    report.num_positives, categories.size()));

  std::vector<std::vector<Detection>> dets_by_category(categories.size());
  for (const Detection& d : detections.detections()) {
    dets_by_category[*dataset.CategoryIndex(d.category)].push_back(d);
  }
  std::vector<std::vector<GroundTruthObject>> objects_by_category(
      categories.size());
  for (const GroundTruthObject& o : dataset.objects()) {
    objects_by_category[*dataset.CategoryIndex(o.category)].push_back(o);
  }

  report.categories.resize(categories.size());
  const unsigned workers =
      config.threads > 0 ? config.threads : ThreadsFromEnvironment();
  ParallelFor(categories.size(), workers, [&](std::size_t i) {
    report.categories[i] =
        AnalyzeCategory(dataset, categories[i], dets_by_category[i],
                        objects_by_category[i], config, report.n_ref);
  });

  const std::vector<FpRecord> all = report.AllFps();
  report.fp_counts = CountFpTypes(all);
  report.fp_distribution = DistributionOf(all, config, categories.size());

  std::vector<SensitivityRow> rows;
  for (const CategoryReport& c : report.categories) {
    rows.insert(rows.end(), c.sensitivity.begin(), c.sensitivity.end());
  }
  for (Characteristic c : kAllCharacteristics) {
    if (auto agg = AggregateSensitivity(c, rows)) {
      report.sensitivity.push_back(std::move(*agg));
    }
  }
  return report;
}

std::optional<double> InitialLocFraction(const FpDistributionSeries& series) {
  if (series.empty()) return std::nullopt;
  return series.front()[FpType::kLoc];
}

ComparisonReport Compare(AnalysisReport a, AnalysisReport b) {
  ComparisonReport cmp;
  for (const CategoryReport& ca : a.categories) {
    const CategoryReport* cb = b.FindCategory(ca.category);
    if (cb == nullptr) continue;
    CategoryDelta d;
    d.category = ca.category;
    d.fp = static_cast<long long>(cb->fp) - static_cast<long long>(ca.fp);
    d.initial_loc_fraction = Diff(InitialLocFraction(ca.fp_distribution),
                                  InitialLocFraction(cb->fp_distribution));
    d.normalized_ap = Diff(ca.normalized_ap, cb->normalized_ap);
    d.ap = Diff(ca.ap, cb->ap);
    cmp.categories.push_back(std::move(d));
  }
  cmp.total_fp =
      static_cast<long long>(b.TotalFp()) - static_cast<long long>(a.TotalFp());
  cmp.initial_loc_fraction = Diff(InitialLocFraction(a.fp_distribution),
                                  InitialLocFraction(b.fp_distribution));
  cmp.mean_normalized_ap = Diff(a.MeanNormalizedAp(), b.MeanNormalizedAp());
  for (Characteristic c : kAllCharacteristics) {
    const SensitivityRow* ra = a.FindSensitivity(c);
    const SensitivityRow* rb = b.FindSensitivity(c);
    if (ra == nullptr || rb == nullptr) continue;
    cmp.sensitivity.push_back({c, rb->sensitivity - ra->sensitivity,
                               rb->max - ra->max, rb->min - ra->min});
  }
  cmp.a = std::move(a);
  cmp.b = std::move(b);
  return cmp;
}

}  // namespace detdiag
