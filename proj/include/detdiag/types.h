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

#ifndef DETDIAG_TYPES_H_
#define DETDIAG_TYPES_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace detdiag {

// Identifier of an image, object or detection. Input files may use integers
// or strings; both are kept verbatim. Integers order numerically and sort
// before strings, strings order lexicographically.
class ObjectId {
 public:
  ObjectId() = default;
  static ObjectId FromInt(std::int64_t value);
  static ObjectId FromString(std::string value);

  bool is_numeric() const { return numeric_; }
  std::int64_t number() const { return number_; }
  const std::string& str() const { return text_; }

  friend bool operator==(const ObjectId& a, const ObjectId& b) {
    return a.numeric_ == b.numeric_ && a.number_ == b.number_ &&
           a.text_ == b.text_;
  }
  friend std::strong_ordering operator<=>(const ObjectId& a,
                                          const ObjectId& b);

 private:
  bool numeric_ = false;
  std::int64_t number_ = 0;
  std::string text_;
};

struct ObjectIdHash {
  std::size_t operator()(const ObjectId& id) const {
    return std::hash<std::string>{}(id.str()) ^ (id.is_numeric() ? 0x9e37u : 0u);
  }
};

// Axis-aligned box, [x, y, w, h] with the origin at the top-left corner.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  bool valid() const;

  friend bool operator==(const BBox&, const BBox&) = default;
};

// The six object characteristics. Size and aspect ratio are derived from
// the box; the other four come from annotation labels.
enum class Characteristic { kOcc, kTrn, kSize, kAsp, kView, kPart };

inline constexpr Characteristic kAllCharacteristics[] = {
    Characteristic::kOcc,  Characteristic::kTrn,  Characteristic::kSize,
    Characteristic::kAsp,  Characteristic::kView, Characteristic::kPart};

std::string_view CharacteristicName(Characteristic c);
std::optional<Characteristic> ParseCharacteristic(std::string_view name);
// True for occ/trn/view/part.
bool IsAnnotated(Characteristic c);

struct ImageInfo {
  ObjectId id;
  double width = 0.0;
  double height = 0.0;
  std::string file_name;

  friend bool operator==(const ImageInfo&, const ImageInfo&) = default;
};

struct GroundTruthObject {
  ObjectId id;
  ObjectId image_id;
  std::string category;
  BBox bbox;
  bool ignore = false;
  // Annotated characteristic name -> level label.
  std::map<std::string, std::string> characteristics;

  friend bool operator==(const GroundTruthObject&,
                         const GroundTruthObject&) = default;
};

// size -> pixel area, asp -> w / h. Throws DomainError for the annotated
// characteristics.
double DerivedCharacteristic(const GroundTruthObject& obj, Characteristic c);

struct Detection {
  ObjectId id;
  ObjectId image_id;
  std::string category;
  BBox bbox;
  double score = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Canonical rank order: descending score, ties by ascending id.
bool CanonicalBefore(const Detection& a, const Detection& b);

// Groups of mutually similar categories. Each category belongs to at most one
// group.
class SimilarityTaxonomy {
 public:
  SimilarityTaxonomy() = default;
  // Throws ValidationError if a category is listed in two groups.
  explicit SimilarityTaxonomy(
      std::map<std::string, std::vector<std::string>> groups);

  bool Similar(std::string_view a, std::string_view b) const;
  std::optional<std::string_view> GroupOf(std::string_view category) const;
  const std::map<std::string, std::vector<std::string>>& groups() const {
    return groups_;
  }

  friend bool operator==(const SimilarityTaxonomy& a,
                         const SimilarityTaxonomy& b) {
    return a.groups_ == b.groups_;
  }

 private:
  std::map<std::string, std::vector<std::string>> groups_;
  std::map<std::string, std::string, std::less<>> group_of_;
};

// Validated, immutable ground truth.
class Dataset {
 public:
  // Throws ValidationError on duplicate ids, dangling references,
  // non-positive boxes or unknown characteristic names.
  Dataset(std::vector<ImageInfo> images, std::vector<GroundTruthObject> objects,
          std::vector<std::string> categories, SimilarityTaxonomy taxonomy);

  const std::vector<ImageInfo>& images() const { return images_; }
  const std::vector<GroundTruthObject>& objects() const { return objects_; }
  const std::vector<std::string>& categories() const { return categories_; }
  const SimilarityTaxonomy& taxonomy() const { return taxonomy_; }

  std::optional<std::size_t> ImageIndex(const ObjectId& id) const;
  std::optional<std::size_t> CategoryIndex(std::string_view name) const;
  // Indices into objects() of the objects in an image, by ascending id.
  std::span<const std::size_t> ObjectsInImage(std::size_t image_index) const;
  // Number of objects not flagged ignore.
  std::size_t NumPositives() const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.images_ == b.images_ && a.objects_ == b.objects_ &&
           a.categories_ == b.categories_ && a.taxonomy_ == b.taxonomy_;
  }

 private:
  std::vector<ImageInfo> images_;
  std::vector<GroundTruthObject> objects_;
  std::vector<std::string> categories_;
  SimilarityTaxonomy taxonomy_;

  std::unordered_map<ObjectId, std::size_t, ObjectIdHash> image_index_;
  std::map<std::string, std::size_t, std::less<>> category_index_;
  std::vector<std::vector<std::size_t>> objects_by_image_;
};

// One detector's output, validated against a Dataset and held in canonical
// rank order.
class DetectionSet {
 public:
  // Throws ValidationError on duplicate ids, unknown image or category,
  // non-positive boxes or scores outside [0, 1].
  DetectionSet(std::string detector, std::vector<Detection> detections,
               const Dataset& dataset);

  const std::string& detector() const { return detector_; }
  std::span<const Detection> detections() const { return detections_; }
  std::size_t size() const { return detections_.size(); }

 private:
  std::string detector_;
  std::vector<Detection> detections_;
};

}  // namespace detdiag

#endif  // DETDIAG_TYPES_H_
