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

#ifndef DETDIAG_FPVIZ_H_
#define DETDIAG_FPVIZ_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "detdiag/analysis.h"
#include "detdiag/types.h"

namespace detdiag {

inline constexpr double kDefaultVizThreshold = 0.3;

// SVG overlay of one image: ground truth in red, false positives scoring
// strictly above the threshold in green with "category score (type)"
// captions. The source image is referenced by file name, not embedded.
struct FpOverlay {
  ObjectId image_id;
  std::string file_name;  // output file name, unique within a run
  std::size_t num_fps = 0;
  std::size_t num_objects = 0;
  std::string svg;
};

// One overlay per image holding at least one qualifying false positive, in
// dataset image order.
std::vector<FpOverlay> RenderFpOverlays(const Dataset& dataset,
                                        const AnalysisReport& report,
                                        double score_threshold =
                                            kDefaultVizThreshold);

void WriteFpOverlays(const std::vector<FpOverlay>& overlays,
                     const std::filesystem::path& out_dir);

}  // namespace detdiag

#endif  // DETDIAG_FPVIZ_H_
