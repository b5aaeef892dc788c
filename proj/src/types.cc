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

#include "detdiag/types.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

#include "detdiag/errors.h"

namespace detdiag {

ObjectId ObjectId::FromInt(std::int64_t value) {
  ObjectId id;
  id.numeric_ = true;
  id.number_ = value;
  id.text_ = std::to_string(value);
  return id;
}

ObjectId ObjectId::FromString(std::string value) {
  ObjectId id;
  id.text_ = std::move(value);
  return id;
}

std::strong_ordering operator<=>(const ObjectId& a, const ObjectId& b) {
  if (a.numeric_ != b.numeric_) {
    return a.numeric_ ? std::strong_ordering::less
                      : std::strong_ordering::greater;
  }
  if (a.numeric_) return a.number_ <=> b.number_;
  return a.text_.compare(b.text_) <=> 0;
}

bool BBox::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) &&
         std::isfinite(h) && w > 0.0 && h > 0.0;
}

namespace {

constexpr std::pair<Characteristic, std::string_view> kNames[] = {
    {Characteristic::kOcc, "occ"},   {Characteristic::kTrn, "trn"},
    {Characteristic::kSize, "size"}, {Characteristic::kAsp, "asp"},
    {Characteristic::kView, "view"}, {Characteristic::kPart, "part"}};

}  // namespace

std::string_view CharacteristicName(Characteristic c) {
  for (const auto& [value, name] : kNames) {
    if (value == c) return name;
  }
  return "?";
}

std::optional<Characteristic> ParseCharacteristic(std::string_view name) {
  for (const auto& [value, n] : kNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

bool IsAnnotated(Characteristic c) {
  return c != Characteristic::kSize && c != Characteristic::kAsp;
}

double DerivedCharacteristic(const GroundTruthObject& obj, Characteristic c) {
  switch (c) {
    case Characteristic::kSize:
      return obj.bbox.area();
    case Characteristic::kAsp:
      return obj.bbox.w / obj.bbox.h;
    default:
      throw DomainError("characteristic '" +
                        std::string(CharacteristicName(c)) +
                        "' is annotated, not derived");
  }
}

bool CanonicalBefore(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

SimilarityTaxonomy::SimilarityTaxonomy(
    std::map<std::string, std::vector<std::string>> groups)
    : groups_(std::move(groups)) {
  for (auto& [name, members] : groups_) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (const auto& category : members) {
      auto [it, inserted] = group_of_.emplace(category, name);
      if (!inserted) {
        throw ValidationError("category listed in groups '" + it->second +
                                  "' and '" + name + "'",
                              category);
      }
    }
  }
}

bool SimilarityTaxonomy::Similar(std::string_view a, std::string_view b) const {
  if (a == b) return false;
  auto ga = group_of_.find(a);
  auto gb = group_of_.find(b);
  return ga != group_of_.end() && gb != group_of_.end() &&
         ga->second == gb->second;
}

std::optional<std::string_view> SimilarityTaxonomy::GroupOf(
    std::string_view category) const {
  auto it = group_of_.find(category);
  if (it == group_of_.end()) return std::nullopt;
  return std::string_view(it->second);
}

Dataset::Dataset(std::vector<ImageInfo> images,
                 std::vector<GroundTruthObject> objects,
                 std::vector<std::string> categories,
                 SimilarityTaxonomy taxonomy)
    : images_(std::move(images)),
      objects_(std::move(objects)),
      categories_(std::move(categories)),
      taxonomy_(std::move(taxonomy)) {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const ImageInfo& image = images_[i];
    if (!image_index_.emplace(image.id, i).second) {
      throw ValidationError("duplicate image id", image.id.str());
    }
    if (!(image.width > 0.0) || !(image.height > 0.0) ||
        !std::isfinite(image.width) || !std::isfinite(image.height)) {
      throw ValidationError("image size must be positive", image.id.str());
    }
  }
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (!category_index_.emplace(categories_[i], i).second) {
      throw ValidationError("duplicate category", categories_[i]);
    }
  }
  objects_by_image_.resize(images_.size());
  std::unordered_set<ObjectId, ObjectIdHash> seen;
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const GroundTruthObject& obj = objects_[i];
    if (!seen.insert(obj.id).second) {
      throw ValidationError("duplicate object id", obj.id.str());
    }
    auto image = image_index_.find(obj.image_id);
    if (image == image_index_.end()) {
      throw ValidationError("object references unknown image '" +
                                obj.image_id.str() + "'",
                            obj.id.str());
    }
    if (!category_index_.contains(obj.category)) {
      throw ValidationError(
          "object references unknown category '" + obj.category + "'",
          obj.id.str());
    }
    if (!obj.bbox.valid()) {
      throw ValidationError("object box must have w > 0 and h > 0",
                            obj.id.str());
    }
    for (const auto& [name, level] : obj.characteristics) {
      auto c = ParseCharacteristic(name);
      if (!c || !IsAnnotated(*c)) {
        throw ValidationError("unknown annotated characteristic '" + name + "'",
                              obj.id.str());
      }
    }
    objects_by_image_[image->second].push_back(i);
  }
  for (auto& bucket : objects_by_image_) {
    std::sort(bucket.begin(), bucket.end(), [this](std::size_t a, std::size_t b) {
      return objects_[a].id < objects_[b].id;
    });
  }
}

std::optional<std::size_t> Dataset::ImageIndex(const ObjectId& id) const {
  auto it = image_index_.find(id);
  if (it == image_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Dataset::CategoryIndex(std::string_view name) const {
  auto it = category_index_.find(name);
  if (it == category_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> Dataset::ObjectsInImage(
    std::size_t image_index) const {
  return objects_by_image_.at(image_index);
}

std::size_t Dataset::NumPositives() const {
  return static_cast<std::size_t>(
      std::count_if(objects_.begin(), objects_.end(),
                    [](const GroundTruthObject& o) { return !o.ignore; }));
}

DetectionSet::DetectionSet(std::string detector,
                           std::vector<Detection> detections,
                           const Dataset& dataset)
    : detector_(std::move(detector)), detections_(std::move(detections)) {
  std::unordered_set<ObjectId, ObjectIdHash> seen;
  for (const Detection& det : detections_) {
    if (!seen.insert(det.id).second) {
      throw ValidationError("duplicate detection id", det.id.str());
    }
    if (!dataset.ImageIndex(det.image_id)) {
      throw ValidationError(
          "detection references unknown image '" + det.image_id.str() + "'",
          det.id.str());
    }
    if (!dataset.CategoryIndex(det.category)) {
      throw ValidationError(
          "detection references unknown category '" + det.category + "'",
          det.id.str());
    }
    if (!det.bbox.valid()) {
      throw ValidationError("detection box must have w > 0 and h > 0",
                            det.id.str());
    }
    if (!(det.score >= 0.0 && det.score <= 1.0)) {
      throw ValidationError("score outside [0, 1]", det.id.str());
    }
  }
  std::sort(detections_.begin(), detections_.end(), CanonicalBefore);
}

}  // namespace detdiag
