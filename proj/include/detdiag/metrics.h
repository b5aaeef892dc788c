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

#ifndef DETDIAG_METRICS_H_
#define DETDIAG_METRICS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "detdiag/fp_taxonomy.h"
#include "detdiag/geometry.h"

namespace detdiag {

// Precision/recall at every rank, ignored detections dropped.
struct PrCurve {
  std::size_t n_pos = 0;
  std::vector<double> score;  // empty when no scores were supplied
  std::vector<std::size_t> cum_tp;
  std::vector<std::size_t> cum_fp;
  std::vector<double> recall;
  std::vector<double> precision;

  std::size_t size() const { return cum_tp.size(); }
};

// `verdicts` in rank order. `scores`, when non-empty, must be aligned with
// them.
PrCurve BuildPrCurve(std::span<const Verdict> verdicts, std::size_t n_pos,
                     std::span<const double> scores = {});
PrCurve BuildPrCurve(const MatchResult& match, std::size_t n_pos);

enum class ApMode { kEnvelope, kElevenPoint };

std::string_view ApModeName(ApMode mode);
std::optional<ApMode> ParseApMode(std::string_view name);

// Area under the precision envelope max_{k: r(k) >= r} p(k). kElevenPoint
// averages the envelope at r = 0, 0.1, ..., 1 instead.
double InterpolatedArea(std::span<const double> recall,
                        std::span<const double> precision, ApMode mode);

double AveragePrecision(const PrCurve& curve, ApMode mode = ApMode::kEnvelope);

// Precision renormalized to `n_ref` positives:
//   pN(k) = r(k) n_ref / (r(k) n_ref + cumFP(k)),  pN = 1 when both are 0,
// then integrated like AveragePrecision. Throws DomainError if n_ref <= 0.
double NormalizedAveragePrecision(const PrCurve& curve, double n_ref,
                                  ApMode mode = ApMode::kEnvelope);

// ceil(num_positives / num_categories), at least 1.
std::size_t DefaultReferenceCount(std::size_t num_positives,
                                  std::size_t num_categories);

struct FpDistributionEntry {
  std::size_t k = 0;
  // Indexed by FpType.
  std::array<double, 4> fractions{};

  double operator[](FpType t) const {
    return fractions[static_cast<std::size_t>(t)];
  }
  friend bool operator==(const FpDistributionEntry&,
                         const FpDistributionEntry&) = default;
};

using FpDistributionSeries = std::vector<FpDistributionEntry>;

// Type fractions among the k top-ranked false positives for each k in
// `schedule`. Throws ScheduleError unless the schedule is strictly
// increasing, starts at >= 1 and stays within types.size().
FpDistributionSeries BuildFpDistribution(std::span<const FpType> types,
                                         std::span<const std::size_t> schedule);

// Eight log-spaced prefix sizes from 25 * num_categories / 20 up to num_fps,
// clamped to [1, num_fps] and deduplicated. Empty when num_fps is 0.
std::vector<std::size_t> DefaultSchedule(std::size_t num_categories,
                                         std::size_t num_fps);

// Keeps the entries of `schedule` that fit within num_fps.
std::vector<std::size_t> ClampSchedule(std::span<const std::size_t> schedule,
                                       std::size_t num_fps);

}  // namespace detdiag

#endif  // DETDIAG_METRICS_H_
