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

#ifndef DETDIAG_TESTS_TEST_UTIL_H_
#define DETDIAG_TESTS_TEST_UTIL_H_

#include <atomic>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <unistd.h>
#include <vector>

#include "detdiag/io.h"
#include "detdiag/types.h"

namespace detdiag::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("detdiag_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline GroundTruthObject Gt(std::int64_t id, std::int64_t image,
                            std::string category, BBox box,
                            bool ignore = false) {
  GroundTruthObject o;
  o.id = ObjectId::FromInt(id);
  o.image_id = ObjectId::FromInt(image);
  o.category = std::move(category);
  o.bbox = box;
  o.ignore = ignore;
  return o;
}

inline Detection Det(std::int64_t id, std::int64_t image, std::string category,
                     BBox box, double score) {
  Detection d;
  d.id = ObjectId::FromInt(id);
  d.image_id = ObjectId::FromInt(image);
  d.category = std::move(category);
  d.bbox = box;
  d.score = score;
  return d;
}

// Images 1..num_images of 640x480.
inline Dataset MakeDataset(std::vector<GroundTruthObject> objects,
                           std::vector<std::string> categories,
                           SimilarityTaxonomy taxonomy = {},
                           int num_images = 1) {
  std::vector<ImageInfo> images;
  for (int i = 1; i <= num_images; ++i) {
    images.push_back({ObjectId::FromInt(i), 640, 480,
                      "img_" + std::to_string(i) + ".jpg"});
  }
  return Dataset(std::move(images), std::move(objects), std::move(categories),
                 std::move(taxonomy));
}

inline std::string XmlUnescape(std::string_view s) {
  static constexpr std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool replaced = false;
    if (s[i] == '&') {
      for (const auto& [entity, c] : kEntities) {
        if (s.substr(i, entity.size()) == entity) {
          out += c;
          i += entity.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += s[i++];
  }
  return out;
}

// Payload of <metadata id="detdiag-data"> in an SVG document, or null.
inline nlohmann::json SvgMetadata(std::string_view svg) {
  constexpr std::string_view kOpen = "<metadata id=\"detdiag-data\">";
  const auto begin = svg.find(kOpen);
  if (begin == std::string_view::npos) return nullptr;
  const auto start = begin + kOpen.size();
  const auto end = svg.find("</metadata>", start);
  if (end == std::string_view::npos) return nullptr;
  return nlohmann::json::parse(XmlUnescape(svg.substr(start, end - start)));
}

inline std::size_t CountOccurrences(std::string_view haystack,
                                    std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace detdiag::testing

#endif  // DETDIAG_TESTS_TEST_UTIL_H_
