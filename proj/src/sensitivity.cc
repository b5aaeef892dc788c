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

#include "detdiag/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "detdiag/errors.h"

namespace detdiag {
namespace {

std::vector<std::string> QuantileLabels(Characteristic feature,
                                        std::size_t bins) {
  if (bins == 5) {
    if (feature == Characteristic::kSize) return {"XS", "S", "M", "L", "XL"};
    return {"XT", "T", "M", "W", "XW"};
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < bins; ++i) labels.push_back("Q" + std::to_string(i + 1));
  return labels;
}

void ValidateCuts(std::span<const double> cuts) {
  double prev = 0.0;
  for (double c : cuts) {
    if (!(c > prev) || !(c < 1.0)) {
      throw DomainError("quantile cuts must be strictly increasing in (0, 1)");
    }
    prev = c;
  }
}

}  // namespace

std::optional<std::size_t> CharacteristicBinning::LabelIndex(
    std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t CharacteristicBinning::SubsetSize(std::size_t label_index) const {
  return static_cast<std::size_t>(
      std::count(assignment.begin(), assignment.end(), label_index));
}

CharacteristicBinning BinByQuantiles(std::span<const GroundTruthObject> objects,
                                     Characteristic feature,
                                     std::span<const double> cuts) {
  if (IsAnnotated(feature)) {
    throw DomainError("quantile binning needs size or asp");
  }
  ValidateCuts(cuts);

  std::vector<double> values;
  for (const GroundTruthObject& obj : objects) {
    if (!obj.ignore) values.push_back(DerivedCharacteristic(obj, feature));
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty() || sorted.front() == sorted.back()) {
    throw DegenerateError("fewer than two distinct " +
                          std::string(CharacteristicName(feature)) + " values");
  }

  // Nearest rank: the ceil(q n)-th smallest value. The epsilon keeps q n
  // that is integral in exact arithmetic from rounding up a rank.
  const double n = static_cast<double>(sorted.size());
  std::vector<double> thresholds;
  for (double q : cuts) {
    auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    thresholds.push_back(sorted[rank - 1]);
  }

  CharacteristicBinning binning;
  binning.characteristic = feature;
  binning.labels = QuantileLabels(feature, cuts.size() + 1);
  binning.assignment.reserve(objects.size());
  for (const GroundTruthObject& obj : objects) {
    if (obj.ignore) {
      binning.assignment.push_back(kUnassigned);
      continue;
    }
    const double v = DerivedCharacteristic(obj, feature);
    auto it = std::lower_bound(thresholds.begin(), thresholds.end(), v);
    binning.assignment.push_back(
        static_cast<std::size_t>(it - thresholds.begin()));
  }
  return binning;
}

CharacteristicBinning BinByQuantilesOrAll(
    std::span<const GroundTruthObject> objects, Characteristic feature,
    std::span<const double> cuts) {
  try {
    return BinByQuantiles(objects, feature, cuts);
  } catch (const DegenerateError&) {
    CharacteristicBinning binning;
    binning.characteristic = feature;
    binning.labels = {std::string(kAllSubset)};
    for (const GroundTruthObject& obj : objects) {
      binning.assignment.push_back(obj.ignore ? kUnassigned : 0);
    }
    return binning;
  }
}

CharacteristicBinning BinByLabel(std::span<const GroundTruthObject> objects,
                                 Characteristic characteristic) {
  const std::string name(CharacteristicName(characteristic));
  std::set<std::string> distinct;
  bool any_unlabeled = false;
  for (const GroundTruthObject& obj : objects) {
    if (obj.ignore) continue;
    auto it = obj.characteristics.find(name);
    if (it == obj.characteristics.end()) {
      any_unlabeled = true;
    } else {
      distinct.insert(it->second);
    }
  }
  // A literal "unlabeled" annotation merges with missing labels.
  if (distinct.erase(std::string(kUnlabeled)) > 0) any_unlabeled = true;

  CharacteristicBinning binning;
  binning.characteristic = characteristic;
  binning.labels.assign(distinct.begin(), distinct.end());
  if (any_unlabeled) binning.labels.emplace_back(kUnlabeled);

  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < binning.labels.size(); ++i) {
    index.emplace(binning.labels[i], i);
  }
  for (const GroundTruthObject& obj : objects) {
    if (obj.ignore) {
      binning.assignment.push_back(kUnassigned);
      continue;
    }
    auto it = obj.characteristics.find(name);
    const std::string_view label =
        it == obj.characteristics.end() ? kUnlabeled : std::string_view(it->second);
    binning.assignment.push_back(index.find(label)->second);
  }
  return binning;
}

CharacteristicBinning BinObjects(std::span<const GroundTruthObject> objects,
                                 Characteristic characteristic,
                                 std::span<const double> cuts) {
  if (IsAnnotated(characteristic)) return BinByLabel(objects, characteristic);
  return BinByQuantilesOrAll(objects, characteristic, cuts);
}

std::optional<double> SubsetNormalizedAp(const MatchResult& match,
                                         const CharacteristicBinning& binning,
                                         std::string_view subset, double n_ref,
                                         ApMode mode) {
  auto label = binning.LabelIndex(subset);
  if (!label) return std::nullopt;
  const std::size_t n_pos = binning.SubsetSize(*label);
  if (n_pos == 0) return std::nullopt;

  std::vector<Verdict> verdicts;
  verdicts.reserve(match.verdicts.size());
  for (const DetectionVerdict& v : match.verdicts) {
    if (v.verdict == Verdict::kTruePositive &&
        binning.assignment[v.matched_gt] != *label) {
      verdicts.push_back(Verdict::kIgnored);
    } else {
      verdicts.push_back(v.verdict);
    }
  }
  return NormalizedAveragePrecision(BuildPrCurve(verdicts, n_pos), n_ref, mode);
}

std::optional<SensitivityRow> SummarizeSensitivity(
    Characteristic characteristic, std::span<const std::string> subsets,
    std::span<const std::optional<double>> values) {
  SensitivityRow row;
  row.characteristic = characteristic;
  row.subsets.assign(subsets.begin(), subsets.end());
  row.values.assign(values.begin(), values.end());
  bool any = false;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (subsets[i] == kUnlabeled || !values[i]) continue;
    if (!any) {
      row.max = row.min = *values[i];
      any = true;
    } else {
      row.max = std::max(row.max, *values[i]);
      row.min = std::min(row.min, *values[i]);
    }
  }
  if (!any) return std::nullopt;
  row.sensitivity = row.max - row.min;
  return row;
}

std::optional<SensitivityRow> AggregateSensitivity(
    Characteristic characteristic, std::span<const SensitivityRow> rows) {
  std::vector<const SensitivityRow*> present;
  for (const SensitivityRow& r : rows) {
    if (r.characteristic == characteristic) present.push_back(&r);
  }
  if (present.empty()) return std::nullopt;

  SensitivityRow agg;
  agg.characteristic = characteristic;
  agg.num_categories = present.size();

  for (const SensitivityRow* r : present) {
    for (const std::string& s : r->subsets) {
      if (std::find(agg.subsets.begin(), agg.subsets.end(), s) ==
          agg.subsets.end()) {
        agg.subsets.push_back(s);
      }
    }
  }
  // Quantile labels in bin order, everything else lexicographic, "unlabeled"
  // last.
  const std::vector<std::string> bins = QuantileLabels(characteristic, 5);
  auto key = [&](const std::string& s) {
    const auto pos = std::find(bins.begin(), bins.end(), s) - bins.begin();
    const bool known = !IsAnnotated(characteristic) &&
                       pos < static_cast<std::ptrdiff_t>(bins.size());
    return std::make_tuple(s == kUnlabeled, known ? pos : bins.size(), s);
  };
  std::sort(agg.subsets.begin(), agg.subsets.end(),
            [&](const std::string& a, const std::string& b) {
              return key(a) < key(b);
            });
  for (const std::string& s : agg.subsets) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const SensitivityRow* r : present) {
      for (std::size_t i = 0; i < r->subsets.size(); ++i) {
        if (r->subsets[i] == s && r->values[i]) {
          sum += *r->values[i];
          ++n;
        }
      }
    }
    agg.values.push_back(n == 0 ? std::nullopt
                                : std::optional<double>(sum / static_cast<double>(n)));
  }

  double max_sum = 0.0;
  double min_sum = 0.0;
  for (const SensitivityRow* r : present) {
    max_sum += r->max;
    min_sum += r->min;
  }
  const double n = static_cast<double>(present.size());
  agg.max = max_sum / n;
  agg.min = min_sum / n;
  agg.sensitivity = std::max(0.0, agg.max - agg.min);
  return agg;
}

}  // namespace detdiag
