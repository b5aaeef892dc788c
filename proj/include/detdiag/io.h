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

#ifndef DETDIAG_IO_H_
#define DETDIAG_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "detdiag/types.h"
#include "json.hpp"

namespace detdiag {

// Reads a whole file. Throws IoError if it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);
// Writes a whole file, creating parent directories. Throws IoError.
void WriteFile(const std::filesystem::path& path, const std::string& contents);

// Loaders throw IoError (unreadable file), ParseError (bad JSON or schema)
// and ValidationError (broken cross-references or invariants).
Dataset LoadDataset(const std::filesystem::path& gt_path,
                    const std::filesystem::path& taxonomy_path);
DetectionSet LoadDetections(const std::filesystem::path& det_path,
                            const Dataset& dataset);

SimilarityTaxonomy ParseTaxonomy(const nlohmann::json& doc);
Dataset ParseDataset(const nlohmann::json& gt_doc,
                     const nlohmann::json& taxonomy_doc);
DetectionSet ParseDetections(const nlohmann::json& doc, const Dataset& dataset);

// Serializers produce documents the parsers above accept.
nlohmann::json GroundTruthToJson(const Dataset& dataset);
nlohmann::json TaxonomyToJson(const SimilarityTaxonomy& taxonomy);
nlohmann::json DetectionsToJson(const std::string& detector,
                                std::span<const Detection> detections);

nlohmann::json IdToJson(const ObjectId& id);

}  // namespace detdiag

#endif  // DETDIAG_IO_H_
