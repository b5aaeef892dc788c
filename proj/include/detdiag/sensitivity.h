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

#ifndef DETDIAG_SENSITIVITY_H_
#define DETDIAG_SENSITIVITY_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detdiag/geometry.h"
#include "detdiag/metrics.h"
#include "detdiag/types.h"

namespace detdiag {

inline constexpr std::string_view kUnlabeled = "unlabeled";
inline constexpr std::string_view kAllSubset = "all";
inline constexpr std::size_t kUnassigned =
    std::numeric_limits<std::size_t>::max();

inline constexpr double kDefaultCuts[] = {0.1, 0.3, 0.7, 0.9};

// Partition of one category's non-ignored objects by a characteristic.
struct CharacteristicBinning {
  Characteristic characteristic = Characteristic::kSize;
  std::vector<std::string> labels;
  // Aligned with the objects that were binned: index into `labels`, or
  // kUnassigned for ignored objects.
  std::vector<std::size_t> assignment;

  std::optional<std::size_t> LabelIndex(std::string_view label) const;
  std::size_t SubsetSize(std::size_t label_index) const;
};

// Splits size or aspect ratio at nearest-rank empirical quantiles; a value
// equal to a cut point falls in the lower bin. Four cuts give the labels
// XS/S/M/L/XL (size) or XT/T/M/W/XW (aspect). Throws DomainError for bad
// cuts or an annotated characteristic, DegenerateError when fewer than two
// distinct values exist.
CharacteristicBinning BinByQuantiles(std::span<const GroundTruthObject> objects,
                                     Characteristic feature,
                                     std::span<const double> cuts);

// As BinByQuantiles but a degenerate sample yields a single "all" subset.
CharacteristicBinning BinByQuantilesOrAll(
    std::span<const GroundTruthObject> objects, Characteristic feature,
    std::span<const double> cuts);

// One subset per distinct label, sorted; objects without the label go to
// "unlabeled".
CharacteristicBinning BinByLabel(std::span<const GroundTruthObject> objects,
                                 Characteristic characteristic);

// Dispatches on the characteristic kind.
CharacteristicBinning BinObjects(std::span<const GroundTruthObject> objects,
                                 Characteristic characteristic,
                                 std::span<const double> cuts);

// Normalized AP with positives restricted to one subset. True positives that
// matched objects outside the subset are dropped from the curve; false
// positives stay. Absent when the subset has no positives. `match` and
// `binning` must refer to the same ground-truth span.
std::optional<double> SubsetNormalizedAp(const MatchResult& match,
                                         const CharacteristicBinning& binning,
                                         std::string_view subset, double n_ref,
                                         ApMode mode = ApMode::kEnvelope);

struct SensitivityRow {
  Characteristic characteristic = Characteristic::kSize;
  std::vector<std::string> subsets;
  std::vector<std::optional<double>> values;
  double max = 0.0;
  double min = 0.0;
  double sensitivity = 0.0;
  // Categories averaged into an aggregate row; 1 for a per-category row.
  std::size_t num_categories = 1;
};

// Max and min over present subsets other than "unlabeled". Absent when no
// such subset has a value.
std::optional<SensitivityRow> SummarizeSensitivity(
    Characteristic characteristic, std::span<const std::string> subsets,
    std::span<const std::optional<double>> values);

// Unweighted mean over categories of the per-category rows of
// `characteristic`. Subset values are averaged over the categories where the
// subset is present; max and min are the means of the per-category extremes.
std::optional<SensitivityRow> AggregateSensitivity(
    Characteristic characteristic, std::span<const SensitivityRow> rows);

}  // namespace detdiag

#endif  // DETDIAG_SENSITIVITY_H_
