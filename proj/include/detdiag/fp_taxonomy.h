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

#ifndef DETDIAG_FP_TAXONOMY_H_
#define DETDIAG_FP_TAXONOMY_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detdiag/types.h"

namespace detdiag {

// Lower edge of the overlap bands that separate Loc, Sim and Oth from BG.
inline constexpr double kMinErrorIou = 0.1;

// False-positive types, in precedence order.
enum class FpType { kLoc = 0, kSim = 1, kOth = 2, kBg = 3 };

inline constexpr std::array<FpType, 4> kAllFpTypes = {
    FpType::kLoc, FpType::kSim, FpType::kOth, FpType::kBg};

std::string_view FpTypeName(FpType t);
std::optional<FpType> ParseFpType(std::string_view name);

// Best overlaps of a false positive against the non-ignored objects of its
// image, split by class relation.
struct FpEvidence {
  double same_class_iou = 0.0;
  double similar_class_iou = 0.0;
  double other_class_iou = 0.0;

  friend bool operator==(const FpEvidence&, const FpEvidence&) = default;
};

struct FpRecord {
  ObjectId detection_id;
  ObjectId image_id;
  std::string category;
  BBox bbox;
  double score = 0.0;
  FpType type = FpType::kBg;
  FpEvidence evidence;
  bool duplicate = false;
};

// One overlap of a detection with a ground-truth object of its image.
struct GtOverlap {
  std::string_view category;
  double iou = 0.0;
};

// Precedence Loc > Sim > Oth > BG. Any same-class overlap of at least
// `min_iou` is Loc: the [0.1, 0.5) band plus duplicates at or above the TP
// threshold.
FpType ClassifyEvidence(const FpEvidence& evidence,
                        double min_iou = kMinErrorIou);

FpEvidence GatherEvidence(std::string_view category,
                          const SimilarityTaxonomy& taxonomy,
                          std::span<const GtOverlap> overlaps);

FpRecord ClassifyFp(const Detection& det, const SimilarityTaxonomy& taxonomy,
                    std::span<const GtOverlap> overlaps,
                    double min_iou = kMinErrorIou);

// Computes overlaps against every non-ignored object in the detection's
// image, across all categories.
FpRecord ClassifyFp(const Detection& det, const Dataset& dataset,
                    double min_iou = kMinErrorIou);

class FpTypeCounts {
 public:
  std::size_t operator[](FpType t) const {
    return counts_[static_cast<std::size_t>(t)];
  }
  std::size_t& operator[](FpType t) {
    return counts_[static_cast<std::size_t>(t)];
  }
  std::size_t total() const {
    return counts_[0] + counts_[1] + counts_[2] + counts_[3];
  }

  friend bool operator==(const FpTypeCounts&, const FpTypeCounts&) = default;

 private:
  std::array<std::size_t, 4> counts_{};
};

FpTypeCounts CountFpTypes(std::span<const FpRecord> records);

}  // namespace detdiag

#endif  // DETDIAG_FP_TAXONOMY_H_
