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

#ifndef DETDIAG_SYNTH_H_
#define DETDIAG_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "detdiag/types.h"
#include "json.hpp"

namespace detdiag {

// The twenty PASCAL VOC class names.
std::vector<std::string> VocCategories();
// Conventional grouping of the VOC classes into animals, vehicles and
// furniture. It is a convention, not ground truth from any benchmark.
SimilarityTaxonomy DefaultVocTaxonomy();

enum class SynthProfile { kPerfect, kJittered, kConfused, kNoisyBg };

std::string_view SynthProfileName(SynthProfile p);
std::optional<SynthProfile> ParseSynthProfile(std::string_view name);

struct SynthOptions {
  std::uint64_t seed = 0;
  SynthProfile profile = SynthProfile::kPerfect;
  std::size_t num_images = 40;
  std::size_t min_objects_per_image = 1;
  std::size_t max_objects_per_image = 4;
  double ignore_rate = 0.05;
  double unlabeled_rate = 0.1;
  // Maximum shift in pixels of true-positive boxes.
  int jitter = 0;
  // Fraction of objects detected only by a partial box (Loc).
  double loc_rate = 0.0;
  // Fraction of objects detected under a wrong category (Sim within a
  // taxonomy group, Oth otherwise).
  double confuse_rate = 0.0;
  // Boxes placed in object-free grid cells (BG).
  std::size_t bg_per_image = 0;
  std::string detector = "synthetic";

  // Profile defaults: perfect has no errors, jittered seeds Loc errors,
  // confused seeds Sim/Oth errors, noisy-bg adds background boxes.
  static SynthOptions ForProfile(SynthProfile profile, std::uint64_t seed);
};

struct PlantedVerdict {
  ObjectId detection_id;
  // "TP", "Ignored", "FP:Loc", "FP:Sim", "FP:Oth" or "FP:BG".
  std::string verdict;
  std::optional<ObjectId> object_id;
};

struct SyntheticData {
  Dataset dataset;
  std::string detector;
  std::vector<Detection> detections;
  std::vector<PlantedVerdict> manifest;
};

// Objects sit in disjoint cells of a 4x3 grid over 640x480 images, so boxes
// of different objects never overlap and every planted verdict holds by
// construction. Deterministic in the options.
SyntheticData GenerateSynthetic(const SynthOptions& options);

nlohmann::json ManifestToJson(const SynthOptions& options,
                              const SyntheticData& data);

// gt.json, det.json, taxonomy.json and manifest.json. Throws IoError.
void WriteSynthetic(const SynthOptions& options, const SyntheticData& data,
                    const std::filesystem::path& out_dir);

}  // namespace detdiag

#endif  // DETDIAG_SYNTH_H_
