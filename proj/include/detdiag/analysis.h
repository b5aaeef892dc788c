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

#ifndef DETDIAG_ANALYSIS_H_
#define DETDIAG_ANALYSIS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "detdiag/fp_taxonomy.h"
#include "detdiag/geometry.h"
#include "detdiag/metrics.h"
#include "detdiag/sensitivity.h"
#include "detdiag/types.h"

namespace detdiag {

struct AnalysisConfig {
  double tp_iou = kDefaultTpIou;
  // Reference positive count for normalized AP; default derived from the
  // dataset (see DefaultReferenceCount).
  std::optional<double> n_ref;
  std::vector<double> cuts{std::begin(kDefaultCuts), std::end(kDefaultCuts)};
  ApMode ap_mode = ApMode::kEnvelope;
  // Explicit prefix sizes for the FP distribution, clamped per series.
  std::optional<std::vector<std::size_t>> schedule;
  // Drop duplicate detections from the FP taxonomy. They still count as
  // false positives for AP.
  bool exclude_duplicates = false;
  // Worker cap; 0 means hardware concurrency. Never affects results.
  unsigned threads = 0;
};

// Throws DomainError on a config no analysis can run with.
void ValidateConfig(const AnalysisConfig& config);

struct CategoryReport {
  std::string category;
  std::size_t n_pos = 0;
  std::size_t num_detections = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t ignored = 0;
  std::size_t duplicates = 0;
  std::optional<double> ap;
  std::optional<double> normalized_ap;
  FpTypeCounts fp_counts;
  FpDistributionSeries fp_distribution;
  // Canonical order.
  std::vector<FpRecord> fps;
  // Present rows only, in characteristic order.
  std::vector<SensitivityRow> sensitivity;
};

struct AnalysisReport {
  std::string detector;
  AnalysisConfig config;
  double n_ref = 1.0;
  std::size_t num_images = 0;
  std::size_t num_objects = 0;
  std::size_t num_positives = 0;
  std::size_t num_detections = 0;
  std::vector<CategoryReport> categories;
  // All categories' false positives merged in canonical order.
  FpDistributionSeries fp_distribution;
  FpTypeCounts fp_counts;
  // Cross-category mean per characteristic; absent characteristics omitted.
  std::vector<SensitivityRow> sensitivity;

  std::optional<double> MeanAp() const;
  std::optional<double> MeanNormalizedAp() const;
  std::size_t TotalFp() const;
  const CategoryReport* FindCategory(std::string_view name) const;
  const SensitivityRow* FindSensitivity(Characteristic c) const;
  // All false-positive records in canonical order.
  std::vector<FpRecord> AllFps() const;
};

// Matches, classifies and scores every category. Per-category work runs on
// up to config.threads workers (or DETDIAG_THREADS); output is independent
// of the worker count.
AnalysisReport Analyze(const Dataset& dataset, const DetectionSet& detections,
                       const AnalysisConfig& config);

struct CategoryDelta {
  std::string category;
  // B - A. Optional fields are absent when either side is.
  long long fp = 0;
  std::optional<double> initial_loc_fraction;
  std::optional<double> normalized_ap;
  std::optional<double> ap;
};

struct SensitivityDelta {
  Characteristic characteristic = Characteristic::kSize;
  std::optional<double> sensitivity;
  std::optional<double> max;
  std::optional<double> min;
};

struct ComparisonReport {
  AnalysisReport a;
  AnalysisReport b;
  std::vector<CategoryDelta> categories;
  long long total_fp = 0;
  std::optional<double> initial_loc_fraction;
  std::optional<double> mean_normalized_ap;
  std::vector<SensitivityDelta> sensitivity;
};

// Fraction of Loc among the first schedule entry of a series.
std::optional<double> InitialLocFraction(const FpDistributionSeries& series);

// Deltas B - A between two reports produced under the same config.
ComparisonReport Compare(AnalysisReport a, AnalysisReport b);

// Worker count from DETDIAG_THREADS, falling back to hardware concurrency.
unsigned ThreadsFromEnvironment();

}  // namespace detdiag

#endif  // DETDIAG_ANALYSIS_H_
