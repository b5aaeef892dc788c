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

#include "detdiag/fp_taxonomy.h"

#include <algorithm>
#include <vector>

#include "detdiag/geometry.h"

namespace detdiag {

std::string_view FpTypeName(FpType t) {
  switch (t) {
    case FpType::kLoc:
      return "Loc";
    case FpType::kSim:
      return "Sim";
    case FpType::kOth:
      return "Oth";
    case FpType::kBg:
      return "BG";
  }
  return "?";
}

std::optional<FpType> ParseFpType(std::string_view name) {
  for (FpType t : kAllFpTypes) {
    if (FpTypeName(t) == name) return t;
  }
  return std::nullopt;
}

FpType ClassifyEvidence(const FpEvidence& evidence, double min_iou) {
  if (evidence.same_class_iou >= min_iou) return FpType::kLoc;
  if (evidence.similar_class_iou >= min_iou) return FpType::kSim;
  if (evidence.other_class_iou >= min_iou) return FpType::kOth;
  return FpType::kBg;
}

FpEvidence GatherEvidence(std::string_view category,
                          const SimilarityTaxonomy& taxonomy,
                          std::span<const GtOverlap> overlaps) {
  FpEvidence e;
  for (const GtOverlap& o : overlaps) {
    double* slot = nullptr;
    if (o.category == category) {
      slot = &e.same_class_iou;
    } else if (taxonomy.Similar(category, o.category)) {
      slot = &e.similar_class_iou;
    } else {
      slot = &e.other_class_iou;
    }
    *slot = std::max(*slot, o.iou);
  }
  return e;
}

FpRecord ClassifyFp(const Detection& det, const SimilarityTaxonomy& taxonomy,
                    std::span<const GtOverlap> overlaps, double min_iou) {
  FpRecord rec;
  rec.detection_id = det.id;
  rec.image_id = det.image_id;
  rec.category = det.category;
  rec.bbox = det.bbox;
  rec.score = det.score;
  rec.evidence = GatherEvidence(det.category, taxonomy, overlaps);
  rec.type = ClassifyEvidence(rec.evidence, min_iou);
  return rec;
}

FpRecord ClassifyFp(const Detection& det, const Dataset& dataset,
                    double min_iou) {
  std::vector<GtOverlap> overlaps;
  if (auto image = dataset.ImageIndex(det.image_id)) {
    for (std::size_t i : dataset.ObjectsInImage(*image)) {
      const GroundTruthObject& obj = dataset.objects()[i];
      if (obj.ignore) continue;
      overlaps.push_back({obj.category, Iou(det.bbox, obj.bbox)});
    }
  }
  return ClassifyFp(det, dataset.taxonomy(), overlaps, min_iou);
}

FpTypeCounts CountFpTypes(std::span<const FpRecord> records) {
  FpTypeCounts counts;
  for (const FpRecord& r : records) ++counts[r.type];
  return counts;
}

}  // namespace detdiag
