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

#include "detdiag/geometry.h"

#include <algorithm>
#include <unordered_map>

namespace detdiag {

double Iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::min(1.0, inter / uni);
}

std::size_t MatchResult::Count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(verdicts.begin(), verdicts.end(),
                    [v](const DetectionVerdict& d) { return d.verdict == v; }));
}

MatchResult MatchCategory(std::span<const Detection> detections,
                          std::span<const GroundTruthObject> objects,
                          double tp_threshold) {
  MatchResult result;
  result.verdicts.resize(detections.size());
  result.gt_matched.assign(objects.size(), false);

  std::unordered_map<ObjectId, std::vector<std::size_t>, ObjectIdHash> by_image;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    by_image[objects[i].image_id].push_back(i);
  }
  for (auto& [image, bucket] : by_image) {
    std::sort(bucket.begin(), bucket.end(), [&](std::size_t a, std::size_t b) {
      return objects[a].id < objects[b].id;
    });
  }

  for (std::size_t d = 0; d < detections.size(); ++d) {
    const Detection& det = detections[d];
    DetectionVerdict& out = result.verdicts[d];
    auto bucket = by_image.find(det.image_id);
    if (bucket == by_image.end()) continue;

    std::size_t best_free = kNoMatch;
    double best_free_iou = -1.0;
    double best_ignored_iou = 0.0;
    for (std::size_t g : bucket->second) {
      const double iou = Iou(det.bbox, objects[g].bbox);
      if (objects[g].ignore) {
        best_ignored_iou = std::max(best_ignored_iou, iou);
        continue;
      }
      out.best_iou_same_class = std::max(out.best_iou_same_class, iou);
      if (!result.gt_matched[g] && iou >= tp_threshold && iou > best_free_iou) {
        best_free = g;
        best_free_iou = iou;
      }
    }

    if (best_free != kNoMatch) {
      out.verdict = Verdict::kTruePositive;
      out.matched_gt = best_free;
      result.gt_matched[best_free] = true;
    } else if (best_ignored_iou >= tp_threshold &&
               best_ignored_iou >= out.best_iou_same_class) {
      out.verdict = Verdict::kIgnored;
    } else {
      out.verdict = Verdict::kFalsePositive;
      out.duplicate = out.best_iou_same_class >= tp_threshold;
    }
  }
  return result;
}

}  // namespace detdiag
