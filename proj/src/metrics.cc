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

#include "detdiag/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "detdiag/errors.h"

namespace detdiag {

PrCurve BuildPrCurve(std::span<const Verdict> verdicts, std::size_t n_pos,
                     std::span<const double> scores) {
  PrCurve curve;
  curve.n_pos = n_pos;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (verdicts[i] == Verdict::kIgnored) continue;
    if (verdicts[i] == Verdict::kTruePositive) {
      ++tp;
    } else {
      ++fp;
    }
    if (!scores.empty()) curve.score.push_back(scores[i]);
    curve.cum_tp.push_back(tp);
    curve.cum_fp.push_back(fp);
    curve.recall.push_back(
        n_pos == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(n_pos));
    curve.precision.push_back(static_cast<double>(tp) /
                              static_cast<double>(tp + fp));
  }
  return curve;
}

PrCurve BuildPrCurve(const MatchResult& match, std::size_t n_pos) {
  std::vector<Verdict> verdicts;
  verdicts.reserve(match.verdicts.size());
  for (const DetectionVerdict& v : match.verdicts) verdicts.push_back(v.verdict);
  return BuildPrCurve(verdicts, n_pos);
}

std::string_view ApModeName(ApMode mode) {
  return mode == ApMode::kEnvelope ? "envelope" : "11point";
}

std::optional<ApMode> ParseApMode(std::string_view name) {
  if (name == "envelope") return ApMode::kEnvelope;
  if (name == "11point") return ApMode::kElevenPoint;
  return std::nullopt;
}

double InterpolatedArea(std::span<const double> recall,
                        std::span<const double> precision, ApMode mode) {
  const std::size_t n = recall.size();
  // envelope[k] = max precision at ranks >= k; recall is non-decreasing so
  // this is the max over every point with recall >= recall[k].
  std::vector<double> envelope(precision.begin(), precision.end());
  for (std::size_t k = n; k-- > 1;) {
    envelope[k - 1] = std::max(envelope[k - 1], envelope[k]);
  }

  if (mode == ApMode::kElevenPoint) {
    double sum = 0.0;
    std::size_t k = 0;
    for (int i = 0; i <= 10; ++i) {
      const double t = i / 10.0;
      while (k < n && recall[k] < t) ++k;
      if (k < n) sum += envelope[k];
    }
    return sum / 11.0;
  }

  double area = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (recall[k] > prev_recall) {
      area += (recall[k] - prev_recall) * envelope[k];
      prev_recall = recall[k];
    }
  }
  return std::clamp(area, 0.0, 1.0);
}

double AveragePrecision(const PrCurve& curve, ApMode mode) {
  return InterpolatedArea(curve.recall, curve.precision, mode);
}

double NormalizedAveragePrecision(const PrCurve& curve, double n_ref,
                                  ApMode mode) {
  if (!(n_ref > 0.0) || !std::isfinite(n_ref)) {
    throw DomainError("normalized AP needs a positive reference count, got " +
                      std::to_string(n_ref));
  }
  std::vector<double> normalized(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double tp_scaled = curve.recall[k] * n_ref;
    const double denom = tp_scaled + static_cast<double>(curve.cum_fp[k]);
    normalized[k] = denom == 0.0 ? 1.0 : tp_scaled / denom;
  }
  return InterpolatedArea(curve.recall, normalized, mode);
}

std::size_t DefaultReferenceCount(std::size_t num_positives,
                                  std::size_t num_categories) {
  if (num_categories == 0) return 1;
  return std::max<std::size_t>(
      1, (num_positives + num_categories - 1) / num_categories);
}

FpDistributionSeries BuildFpDistribution(std::span<const FpType> types,
                                         std::span<const std::size_t> schedule) {
  FpDistributionSeries series;
  std::size_t prev = 0;
  for (std::size_t k : schedule) {
    if (k == 0 || k <= prev) {
      throw ScheduleError("schedule must be strictly increasing from 1");
    }
    if (k > types.size()) {
      throw ScheduleError("schedule entry " + std::to_string(k) +
                          " exceeds the " + std::to_string(types.size()) +
                          " available false positives");
    }
    prev = k;
  }

  std::array<std::size_t, 4> counts{};
  std::size_t seen = 0;
  for (std::size_t k : schedule) {
    for (; seen < k; ++seen) ++counts[static_cast<std::size_t>(types[seen])];
    FpDistributionEntry entry;
    entry.k = k;
    for (std::size_t t = 0; t < 4; ++t) {
      entry.fractions[t] =
          static_cast<double>(counts[t]) / static_cast<double>(k);
    }
    series.push_back(entry);
  }
  return series;
}

std::vector<std::size_t> DefaultSchedule(std::size_t num_categories,
                                         std::size_t num_fps) {
  std::vector<std::size_t> schedule;
  if (num_fps == 0) return schedule;
  constexpr int kPoints = 8;
  const double hi = static_cast<double>(num_fps);
  const double lo = std::clamp(25.0 * static_cast<double>(num_categories) / 20.0,
                               1.0, hi);
  for (int i = 0; i < kPoints; ++i) {
    const double t = static_cast<double>(i) / (kPoints - 1);
    const double v = lo * std::pow(hi / lo, t);
    auto k = static_cast<std::size_t>(std::llround(v));
    k = std::clamp<std::size_t>(k, 1, num_fps);
    if (i == kPoints - 1) k = num_fps;
    if (schedule.empty() || k > schedule.back()) schedule.push_back(k);
  }
  return schedule;
}

std::vector<std::size_t> ClampSchedule(std::span<const std::size_t> schedule,
                                       std::size_t num_fps) {
  std::vector<std::size_t> out;
  for (std::size_t k : schedule) {
    if (k >= 1 && k <= num_fps && (out.empty() || k > out.back())) {
      out.push_back(k);
    }
  }
  return out;
}

}  // namespace detdiag
