#pragma once

// Small on-disk datasets generated at test time.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rohoi/dataset/dataset.hpp"
#include "rohoi/raster/image_io.hpp"
#include "support/images.hpp"

namespace rohoi::testing {

namespace fs = std::filesystem;

inline fs::path fresh_dir(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// n images of w x h, one or two HOI annotations each, written as PNG under
// root/images plus root/annotations.json. Image i is a shifted reference photo.
inline fs::path make_dataset(const fs::path& root, int n, int w = 48, int h = 40,
                             const char* mode = "hico-det") {
  fresh_dir(root);
  nlohmann::json j;
  j["mode"] = mode;
  j["verbs"] = {"hold", "ride", "look"};
  j["objects"] = {"cup", "bike"};
  j["images"] = nlohmann::json::array();
  j["annotations"] = nlohmann::json::array();
  const bool vcoco = std::string(mode) == "v-coco";
  for (int i = 0; i < n; ++i) {
    auto base = reference_photo(w + i, h, 3);
    raster::ImageBuffer img(w, h, 3);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = base.at(x + i, y, c);
    const std::string file = "images/" + std::to_string(100 + i) + ".png";
    raster::write_png(root / file, img);
    j["images"].push_back({{"id", 100 + i}, {"file", file}, {"width", w}, {"height", h}});
    j["annotations"].push_back({{"image_id", 100 + i},
                                {"human_box", {2 + i % 3, 3, w / 3, h / 2}},
                                {"object_box", {w / 2, h / 3, w / 4, h / 3}},
                                {"object_category", i % 2},
                                {"verb", i % 2}});
    if (i % 2 == 0) {
      nlohmann::json extra = {{"image_id", 100 + i},
                              {"human_box", {w / 2, 2, w / 3, h / 3}},
                              {"verb", 2}};
      if (vcoco) {
        extra["object_box"] = nullptr;
        extra["object_category"] = nullptr;
      } else {
        extra["object_box"] = {4, h / 2, w / 5, h / 4};
        extra["object_category"] = 1;
      }
      j["annotations"].push_back(extra);
    }
  }
  write_text(root / "annotations.json", j.dump(2));
  return root / "annotations.json";
}

// One detection per ground truth, scored 1.
inline std::vector<dataset::Detection> perfect_detections(const dataset::AnnotationSet& ann) {
  std::vector<dataset::Detection> out;
  for (const auto& g : ann.gts)
    out.push_back({g.image_id, g.human, g.object, g.object_category, g.verb, 1.0});
  return out;
}

}  // namespace rohoi::testing
