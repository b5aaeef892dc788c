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

#include "detdiag/fpviz.h"

#include <cstdio>
#include <map>
#include <set>

#include "detdiag/io.h"
#include "detdiag/svg.h"

namespace detdiag {
namespace {

std::string SafeName(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

std::string Caption(const FpRecord& r) {
  char score[32];
  std::snprintf(score, sizeof(score), "%.2f", r.score);
  return r.category + " " + score + " (" + std::string(FpTypeName(r.type)) + ")";
}

}  // namespace

std::vector<FpOverlay> RenderFpOverlays(const Dataset& dataset,
                                        const AnalysisReport& report,
                                        double score_threshold) {
  std::map<std::size_t, std::vector<FpRecord>> by_image;
  for (const FpRecord& r : report.AllFps()) {
    if (!(r.score > score_threshold)) continue;
    by_image[*dataset.ImageIndex(r.image_id)].push_back(r);
  }

  std::vector<FpOverlay> overlays;
  std::set<std::string> used;
  for (const auto& [image_index, fps] : by_image) {
    const ImageInfo& image = dataset.images()[image_index];
    FpOverlay overlay;
    overlay.image_id = image.id;
    std::string name = "fp_" + SafeName(image.id.str());
    for (int n = 2; used.contains(name); ++n) {
      name = "fp_" + SafeName(image.id.str()) + "_" + std::to_string(n);
    }
    used.insert(name);
    overlay.file_name = name + ".svg";

    SvgWriter svg(image.width, image.height);
    svg.Image(image.file_name, 0, 0, image.width, image.height);
    for (std::size_t i : dataset.ObjectsInImage(image_index)) {
      const GroundTruthObject& obj = dataset.objects()[i];
      std::string attrs = "class=\"gt\" fill=\"none\" stroke=\"#e00000\" "
                          "stroke-width=\"2\"";
      if (obj.ignore) attrs += " stroke-dasharray=\"5,3\"";
      svg.Rect(obj.bbox.x, obj.bbox.y, obj.bbox.w, obj.bbox.h, attrs);
      ++overlay.num_objects;
    }
    for (const FpRecord& r : fps) {
      svg.Rect(r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h,
               "class=\"fp\" fill=\"none\" stroke=\"#00c000\" "
               "stroke-width=\"2\"");
      const double ty = r.bbox.y >= 14 ? r.bbox.y - 4 : r.bbox.y + 12;
      svg.Text(r.bbox.x + 2, ty, Caption(r),
               "class=\"fp-caption\" font-size=\"12\" fill=\"#00c000\"");
      ++overlay.num_fps;
    }
    overlay.svg = svg.Finish();
    overlays.push_back(std::move(overlay));
  }
  return overlays;
}

void WriteFpOverlays(const std::vector<FpOverlay>& overlays,
                     const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const FpOverlay& o : overlays) WriteFile(out_dir / o.file_name, o.svg);
}

}  // namespace detdiag
