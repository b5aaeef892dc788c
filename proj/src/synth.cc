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

#include "detdiag/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "detdiag/errors.h"
#include "detdiag/io.h"

namespace detdiag {
namespace {

constexpr double kImageW = 640.0;
constexpr double kImageH = 480.0;
constexpr int kCell = 160;
constexpr int kCols = 4;
constexpr int kRows = 3;
constexpr int kCells = kCols * kRows;

// std distributions are implementation-defined; derive everything from the
// raw engine output so files are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t Below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  int Range(int lo, int hi) {
    return lo + static_cast<int>(Below(static_cast<std::size_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 engine_;
};

double RoundScore(double s) { return std::round(s * 1e4) / 1e4; }

const std::map<std::string, std::vector<std::string>>& Levels() {
  static const std::map<std::string, std::vector<std::string>> levels = {
      {"occ", {"none", "low", "moderate", "high"}},
      {"trn", {"none", "truncated"}},
      {"view", {"front", "side", "rear", "top"}},
      {"part", {"all-visible", "partly-visible"}}};
  return levels;
}

BBox Jittered(const BBox& b, int jitter, Rng& rng) {
  if (jitter <= 0) return b;
  return BBox{b.x + rng.Range(-jitter, jitter), b.y + rng.Range(-jitter, jitter),
              b.w, b.h};
}

}  // namespace

std::vector<std::string> VocCategories() {
  return {"aeroplane", "bicycle", "bird",  "boat",        "bottle",
          "bus",       "car",     "cat",   "chair",       "cow",
          "diningtable", "dog",   "horse", "motorbike",   "person",
          "pottedplant", "sheep", "sofa",  "train",       "tvmonitor"};
}

SimilarityTaxonomy DefaultVocTaxonomy() {
  return SimilarityTaxonomy(
      {{"animals", {"bird", "cat", "cow", "dog", "horse", "sheep"}},
       {"vehicles",
        {"aeroplane", "bicycle", "boat", "bus", "car", "motorbike", "train"}},
       {"furniture", {"chair", "diningtable", "sofa"}}});
}

std::string_view SynthProfileName(SynthProfile p) {
  switch (p) {
    case SynthProfile::kPerfect:
      return "perfect";
    case SynthProfile::kJittered:
      return "jittered";
    case SynthProfile::kConfused:
      return "confused";
    case SynthProfile::kNoisyBg:
      return "noisy-bg";
  }
  return "?";
}

std::optional<SynthProfile> ParseSynthProfile(std::string_view name) {
  for (SynthProfile p : {SynthProfile::kPerfect, SynthProfile::kJittered,
                         SynthProfile::kConfused, SynthProfile::kNoisyBg}) {
    if (SynthProfileName(p) == name) return p;
  }
  return std::nullopt;
}

SynthOptions SynthOptions::ForProfile(SynthProfile profile, std::uint64_t seed) {
  SynthOptions o;
  o.seed = seed;
  o.profile = profile;
  switch (profile) {
    case SynthProfile::kPerfect:
      break;
    case SynthProfile::kJittered:
      o.jitter = 2;
      o.loc_rate = 0.3;
      break;
    case SynthProfile::kConfused:
      o.jitter = 2;
      o.confuse_rate = 0.3;
      break;
    case SynthProfile::kNoisyBg:
      o.jitter = 2;
      o.bg_per_image = 2;
      break;
  }
  return o;
}

SyntheticData GenerateSynthetic(const SynthOptions& options) {
  Rng rng(options.seed);
  const std::vector<std::string> categories = VocCategories();
  SimilarityTaxonomy taxonomy = DefaultVocTaxonomy();

  std::vector<ImageInfo> images;
  std::vector<GroundTruthObject> objects;
  std::vector<Detection> dets;
  std::vector<PlantedVerdict> manifest;
  std::int64_t next_object = 1;
  std::int64_t next_det = 1;

  auto add_det = [&](const ObjectId& image, std::string category, BBox box,
                     double score, std::string verdict,
                     std::optional<ObjectId> object) {
    Detection d;
    d.id = ObjectId::FromInt(next_det++);
    d.image_id = image;
    d.category = std::move(category);
    d.bbox = box;
    d.score = RoundScore(score);
    manifest.push_back({d.id, std::move(verdict), std::move(object)});
    dets.push_back(std::move(d));
  };

  const std::size_t max_objects = std::min<std::size_t>(
      options.max_objects_per_image,
      options.bg_per_image > 0 ? kCells - 1 : kCells);
  const std::size_t min_objects =
      std::min(options.min_objects_per_image, max_objects);

  for (std::size_t i = 0; i < options.num_images; ++i) {
    ImageInfo image;
    image.id = ObjectId::FromInt(static_cast<std::int64_t>(i + 1));
    char name[32];
    std::snprintf(name, sizeof(name), "img_%06zu.jpg", i + 1);
    image.file_name = name;
    image.width = kImageW;
    image.height = kImageH;

    std::array<int, kCells> cells;
    for (int c = 0; c < kCells; ++c) cells[c] = c;
    for (int c = kCells - 1; c > 0; --c) {
      std::swap(cells[c], cells[rng.Below(static_cast<std::size_t>(c) + 1)]);
    }
    const auto count = static_cast<std::size_t>(rng.Range(
        static_cast<int>(min_objects), static_cast<int>(max_objects)));

    for (std::size_t k = 0; k < count; ++k) {
      const int cx = (cells[k] % kCols) * kCell;
      const int cy = (cells[k] / kCols) * kCell;
      GroundTruthObject obj;
      obj.id = ObjectId::FromInt(next_object++);
      obj.image_id = image.id;
      obj.category = categories[rng.Below(categories.size())];
      const int w = rng.Range(24, 150);
      const int h = rng.Range(24, 150);
      obj.bbox = BBox{static_cast<double>(cx + rng.Range(0, kCell - w)),
                      static_cast<double>(cy + rng.Range(0, kCell - h)),
                      static_cast<double>(w), static_cast<double>(h)};
      obj.ignore = rng.Uniform() < options.ignore_rate;
      for (const auto& [characteristic, levels] : Levels()) {
        const bool labeled = rng.Uniform() >= options.unlabeled_rate;
        const std::string& level = levels[rng.Below(levels.size())];
        if (labeled) obj.characteristics[characteristic] = level;
      }

      const double u = rng.Uniform();
      const double tp_score = 0.3 + 0.7 * rng.Uniform();
      const double fp_score = 0.95 * rng.Uniform();
      if (obj.ignore) {
        add_det(image.id, obj.category, obj.bbox, tp_score, "Ignored", obj.id);
      } else if (u < options.loc_rate) {
        // Centered part of the object covering 20-40% of its area.
        const double t = 0.2 + 0.2 * rng.Uniform();
        const double pw = std::max(1.0, std::round(w * std::sqrt(t)));
        const double ph = std::max(1.0, std::round(h * std::sqrt(t)));
        const BBox part{obj.bbox.x + std::floor((w - pw) / 2),
                        obj.bbox.y + std::floor((h - ph) / 2), pw, ph};
        add_det(image.id, obj.category, part, fp_score, "FP:Loc", obj.id);
      } else if (u < options.loc_rate + options.confuse_rate) {
        std::vector<std::string> pool;
        std::string verdict = "FP:Oth";
        if (auto group = taxonomy.GroupOf(obj.category)) {
          for (const auto& c : taxonomy.groups().at(std::string(*group))) {
            if (c != obj.category) pool.push_back(c);
          }
          verdict = "FP:Sim";
        } else {
          for (const auto& c : categories) {
            if (c != obj.category) pool.push_back(c);
          }
        }
        add_det(image.id, pool[rng.Below(pool.size())],
                Jittered(obj.bbox, options.jitter, rng), fp_score, verdict,
                obj.id);
      } else {
        add_det(image.id, obj.category, Jittered(obj.bbox, options.jitter, rng),
                tp_score, "TP", obj.id);
      }
      objects.push_back(std::move(obj));
    }

    for (std::size_t b = 0; b < options.bg_per_image; ++b) {
      const int cell = cells[count + rng.Below(kCells - count)];
      const int w = rng.Range(16, 100);
      const int h = rng.Range(16, 100);
      const BBox box{static_cast<double>((cell % kCols) * kCell + rng.Range(0, kCell - w)),
                     static_cast<double>((cell / kCols) * kCell + rng.Range(0, kCell - h)),
                     static_cast<double>(w), static_cast<double>(h)};
      add_det(image.id, categories[rng.Below(categories.size())], box,
              0.95 * rng.Uniform(), "FP:BG", std::nullopt);
    }
    images.push_back(std::move(image));
  }

  return SyntheticData{
      Dataset(std::move(images), std::move(objects), categories,
              std::move(taxonomy)),
      options.detector, std::move(dets), std::move(manifest)};
}

nlohmann::json ManifestToJson(const SynthOptions& options,
                              const SyntheticData& data) {
  nlohmann::json planted = nlohmann::json::array();
  std::map<std::string, std::size_t> counts;
  for (const PlantedVerdict& p : data.manifest) {
    ++counts[p.verdict];
    planted.push_back(
        {{"detection_id", IdToJson(p.detection_id)},
         {"verdict", p.verdict},
         {"object_id", p.object_id ? IdToJson(*p.object_id) : nlohmann::json(nullptr)}});
  }
  return {{"seed", options.seed},
          {"profile", std::string(SynthProfileName(options.profile))},
          {"counts", counts},
          {"planted", std::move(planted)}};
}

void WriteSynthetic(const SynthOptions& options, const SyntheticData& data,
                    const std::filesystem::path& out_dir) {
  WriteFile(out_dir / "gt.json", GroundTruthToJson(data.dataset).dump(1) + "\n");
  WriteFile(out_dir / "det.json",
            DetectionsToJson(data.detector, data.detections).dump(1) + "\n");
  WriteFile(out_dir / "taxonomy.json",
            TaxonomyToJson(data.dataset.taxonomy()).dump(2) + "\n");
  WriteFile(out_dir / "manifest.json",
            ManifestToJson(options, data).dump(1) + "\n");
}

}  // namespace detdiag
