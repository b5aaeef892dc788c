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

#include "detdiag/io.h"

#include <fstream>
#include <sstream>
#include <utility>

#include "detdiag/errors.h"

namespace detdiag {
namespace {

using nlohmann::json;

const json& Field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return *it;
}

ObjectId ParseId(const json& value, const std::string& where) {
  if (value.is_number_integer()) return ObjectId::FromInt(value.get<std::int64_t>());
  if (value.is_string()) return ObjectId::FromString(value.get<std::string>());
  throw ParseError(where + ": id must be an integer or a string");
}

double ParseNumber(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number");
  return value.get<double>();
}

std::string ParseString(const json& value, const std::string& where) {
  if (!value.is_string()) throw ParseError(where + ": expected a string");
  return value.get<std::string>();
}

BBox ParseBox(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 4) {
    throw ParseError(where + ": bbox must be [x, y, w, h]");
  }
  return BBox{ParseNumber(value[0], where), ParseNumber(value[1], where),
              ParseNumber(value[2], where), ParseNumber(value[3], where)};
}

json BoxToJson(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

const json& ArrayField(const json& doc, const char* key,
                       const std::string& where) {
  const json& value = Field(doc, key, where);
  if (!value.is_array()) {
    throw ParseError(where + ": '" + key + "' must be an array");
  }
  return value;
}

json ParseJsonText(const std::string& text, const std::filesystem::path& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() +
                    ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error writing " + path.string());
}

SimilarityTaxonomy ParseTaxonomy(const json& doc) {
  if (!doc.is_object()) throw ParseError("taxonomy: expected an object");
  std::map<std::string, std::vector<std::string>> groups;
  auto it = doc.find("groups");
  if (it == doc.end()) return SimilarityTaxonomy();
  if (!it->is_object()) throw ParseError("taxonomy: 'groups' must be an object");
  for (const auto& [name, members] : it->items()) {
    if (!members.is_array()) {
      throw ParseError("taxonomy group '" + name + "': expected an array");
    }
    auto& out = groups[name];
    for (const json& m : members) {
      out.push_back(ParseString(m, "taxonomy group '" + name + "'"));
    }
  }
  return SimilarityTaxonomy(std::move(groups));
}

Dataset ParseDataset(const json& gt_doc, const json& taxonomy_doc) {
  if (!gt_doc.is_object()) throw ParseError("ground truth: expected an object");

  std::vector<ImageInfo> images;
  for (const json& img : ArrayField(gt_doc, "images", "ground truth")) {
    const std::string where = "image";
    if (!img.is_object()) throw ParseError("image: expected an object");
    ImageInfo info;
    info.id = ParseId(Field(img, "id", where), where);
    const std::string at = "image " + info.id.str();
    info.width = ParseNumber(Field(img, "width", at), at);
    info.height = ParseNumber(Field(img, "height", at), at);
    info.file_name = ParseString(Field(img, "file_name", at), at);
    images.push_back(std::move(info));
  }

  std::vector<std::string> categories;
  for (const json& c : ArrayField(gt_doc, "categories", "ground truth")) {
    categories.push_back(ParseString(c, "categories"));
  }

  std::vector<GroundTruthObject> objects;
  for (const json& o : ArrayField(gt_doc, "objects", "ground truth")) {
    if (!o.is_object()) throw ParseError("object: expected an object");
    GroundTruthObject obj;
    obj.id = ParseId(Field(o, "id", "object"), "object");
    const std::string at = "object " + obj.id.str();
    obj.image_id = ParseId(Field(o, "image_id", at), at);
    obj.category = ParseString(Field(o, "category", at), at);
    obj.bbox = ParseBox(Field(o, "bbox", at), at);
    if (auto it = o.find("ignore"); it != o.end()) {
      if (!it->is_boolean()) throw ParseError(at + ": 'ignore' must be a boolean");
      obj.ignore = it->get<bool>();
    }
    if (auto it = o.find("characteristics"); it != o.end() && !it->is_null()) {
      if (!it->is_object()) {
        throw ParseError(at + ": 'characteristics' must be an object");
      }
      for (const auto& [name, level] : it->items()) {
        obj.characteristics.emplace(name, ParseString(level, at));
      }
    }
    objects.push_back(std::move(obj));
  }

  return Dataset(std::move(images), std::move(objects), std::move(categories),
                 ParseTaxonomy(taxonomy_doc));
}

DetectionSet ParseDetections(const json& doc, const Dataset& dataset) {
  if (!doc.is_object()) throw ParseError("detections: expected an object");
  std::string detector = "detector";
  if (auto it = doc.find("detector"); it != doc.end()) {
    detector = ParseString(*it, "detections");
  }
  std::vector<Detection> dets;
  const json& list = ArrayField(doc, "detections", "detections");
  dets.reserve(list.size());
  for (const json& d : list) {
    if (!d.is_object()) throw ParseError("detection: expected an object");
    Detection det;
    det.id = ParseId(Field(d, "id", "detection"), "detection");
    const std::string at = "detection " + det.id.str();
    det.image_id = ParseId(Field(d, "image_id", at), at);
    det.category = ParseString(Field(d, "category", at), at);
    det.bbox = ParseBox(Field(d, "bbox", at), at);
    det.score = ParseNumber(Field(d, "score", at), at);
    dets.push_back(std::move(det));
  }
  return DetectionSet(std::move(detector), std::move(dets), dataset);
}

Dataset LoadDataset(const std::filesystem::path& gt_path,
                    const std::filesystem::path& taxonomy_path) {
  json gt = ParseJsonText(ReadFile(gt_path), gt_path);
  json taxonomy = ParseJsonText(ReadFile(taxonomy_path), taxonomy_path);
  return ParseDataset(gt, taxonomy);
}

DetectionSet LoadDetections(const std::filesystem::path& det_path,
                            const Dataset& dataset) {
  return ParseDetections(ParseJsonText(ReadFile(det_path), det_path), dataset);
}

json IdToJson(const ObjectId& id) {
  if (id.is_numeric()) return id.number();
  return id.str();
}

json GroundTruthToJson(const Dataset& dataset) {
  json images = json::array();
  for (const ImageInfo& img : dataset.images()) {
    images.push_back({{"id", IdToJson(img.id)},
                      {"width", img.width},
                      {"height", img.height},
                      {"file_name", img.file_name}});
  }
  json objects = json::array();
  for (const GroundTruthObject& obj : dataset.objects()) {
    json o = {{"id", IdToJson(obj.id)},
              {"image_id", IdToJson(obj.image_id)},
              {"category", obj.category},
              {"bbox", BoxToJson(obj.bbox)},
              {"ignore", obj.ignore}};
    o["characteristics"] = json::object();
    for (const auto& [name, level] : obj.characteristics) {
      o["characteristics"][name] = level;
    }
    objects.push_back(std::move(o));
  }
  return {{"images", std::move(images)},
          {"objects", std::move(objects)},
          {"categories", dataset.categories()}};
}

json TaxonomyToJson(const SimilarityTaxonomy& taxonomy) {
  json groups = json::object();
  for (const auto& [name, members] : taxonomy.groups()) groups[name] = members;
  return {{"groups", std::move(groups)}};
}

json DetectionsToJson(const std::string& detector,
                      std::span<const Detection> detections) {
  json list = json::array();
  for (const Detection& d : detections) {
    list.push_back({{"id", IdToJson(d.id)},
                    {"image_id", IdToJson(d.image_id)},
                    {"category", d.category},
                    {"bbox", BoxToJson(d.bbox)},
                    {"score", d.score}});
  }
  return {{"detector", detector}, {"detections", std::move(list)}};
}

}  // namespace detdiag
