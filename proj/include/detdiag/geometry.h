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

#ifndef DETDIAG_GEOMETRY_H_
#define DETDIAG_GEOMETRY_H_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "detdiag/types.h"

namespace detdiag {

inline constexpr double kDefaultTpIou = 0.5;

// Intersection over union in [0, 1]; 0 for disjoint boxes. For boxes with
// integer coordinates every intermediate value is exact, so the result is
// the correctly rounded quotient of the two integer areas.
double Iou(const BBox& a, const BBox& b);

enum class Verdict { kTruePositive, kFalsePositive, kIgnored };

inline constexpr std::size_t kNoMatch = std::numeric_limits<std::size_t>::max();

struct DetectionVerdict {
  Verdict verdict = Verdict::kFalsePositive;
  // Index into the ground-truth span claimed by a true positive.
  std::size_t matched_gt = kNoMatch;
  // Highest IOU with any non-ignored same-class object in the image, claimed
  // or not.
  double best_iou_same_class = 0.0;
  // False positive whose best same-class overlap reaches the TP threshold,
  // i.e. the object was already claimed by a higher-ranked detection.
  bool duplicate = false;
};

struct MatchResult {
  // Aligned with the detection span passed to MatchCategory.
  std::vector<DetectionVerdict> verdicts;
  // Aligned with the ground-truth span.
  std::vector<bool> gt_matched;

  std::size_t Count(Verdict v) const;
};

// Greedy rank-order matching of one category. `detections` must be in
// canonical order; `objects` are the same category's ground truth across all
// images. Each detection claims the unclaimed non-ignored object of its image
// with the highest IOU (ties to the lowest object id) if that IOU reaches
// `tp_threshold`. A detection that claims nothing becomes Ignored when its
// best overlap is an ignored object at or above the threshold, otherwise FP.
MatchResult MatchCategory(std::span<const Detection> detections,
                          std::span<const GroundTruthObject> objects,
                          double tp_threshold = kDefaultTpIou);

}  // namespace detdiag

#endif  // DETDIAG_GEOMETRY_H_
