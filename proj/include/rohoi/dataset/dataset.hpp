#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rohoi/corruption/kinds.hpp"
#include "rohoi/corruption/ladder.hpp"
#include "rohoi/masking/mask.hpp"
#include "rohoi/metrics/hoi.hpp"

namespace rohoi::dataset {

namespace fs = std::filesystem;
using metrics::Detection;
using metrics::GroundTruth;
using metrics::HoiClass;

enum class Mode { kHicoDet, kVcoco };
std::string_view mode_name(Mode m);  // "hico-det", "v-coco"
std::optional<Mode> parse_mode(std::string_view text);

struct ImageRecord {
  std::uint64_t id = 0;
  std::string file;  // relative to the annotation file's directory
  int width = 0;
  int height = 0;
};

// Canonical annotation JSON:
// {"mode": "hico-det" | "v-coco",
//  "images": [{"id", "file", "width", "height"}],
//  "verbs": [names], "objects": [names],
//  "annotations": [{"image_id", "human_box": [x, y, w, h],
//                   "object_box": [x, y, w, h] | null,
//                   "object_category", "verb"}],
//  "rare_classes": [[verb, object], ...]}      (optional)
struct AnnotationSet {
  Mode mode = Mode::kHicoDet;
  std::vector<ImageRecord> images;  // file order
  std::vector<GroundTruth> gts;
  std::vector<std::string> verbs;
  std::vector<std::string> objects;
  std::set<HoiClass> rare;
  fs::path root;

  const ImageRecord* find_image(std::uint64_t id) const;
  fs::path image_path(const ImageRecord& img) const { return root / img.file; }
  bool is_rare(const HoiClass& c) const { return rare.contains(c); }
};

// Throws kParse (with the byte offset), kVocabulary for category ids outside
// the vocabularies, kValidation for GTs on unknown images and bad boxes.
// A mode argument must agree with the file's mode when both are present.
AnnotationSet parse_annotations(std::string_view text, const fs::path& root = {},
                                std::optional<Mode> mode = std::nullopt);
AnnotationSet load_annotations(const fs::path& path, std::optional<Mode> mode = std::nullopt);
std::string annotations_to_json(const AnnotationSet& ann);

// Unique human and object boxes of an image in annotation order, as the
// instances to mask. Mask files `<image_id>_<instance_id>.png` in mask_dir
// replace the filled-box fallback when present.
std::vector<masking::InstanceMask> image_instances(const AnnotationSet& ann,
                                                   const ImageRecord& img,
                                                   const fs::path& mask_dir = {});

struct LineError {
  int line = 0;
  std::string message;
};

struct DetectionLoad {
  std::vector<Detection> detections;
  std::vector<LineError> errors;
};

// JSON Lines, one object per line:
// {"image_id", "human_box", "object_box" | null, "object_category", "verb", "score"}.
// Bad lines are collected; strict mode throws kParse at the first one.
DetectionLoad parse_detections(std::string_view text, bool strict = false);
DetectionLoad load_detections(const fs::path& path, bool strict = false);
std::string detection_to_json(const Detection& d);
void write_detections(const fs::path& path, const std::vector<Detection>& dets);

struct ManifestRecord {
  std::uint64_t image_id = 0;
  std::string kind;  // slug
  int severity = 0;
  std::uint64_t seed = 0;
  std::string ladder_hash;
  std::string sha256;  // of the written file
  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

struct Manifest {
  std::string ladder_hash;
  std::uint64_t global_seed = 0;
  std::map<std::string, ManifestRecord> records;  // keyed by path relative to the output dir

  std::string to_json() const;
  static Manifest from_json(std::string_view text);
  // SHA-256 of to_json().
  std::string hash() const;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct Cell {
  corruption::Kind kind;
  int severity;
};

// Every (kind, severity) pair in registry order.
std::vector<Cell> all_cells();

// `<kind slug>/<severity>/<image_id>.png`.
std::string cell_path(const Cell& cell, std::uint64_t image_id);

struct WriteOptions {
  int threads = 0;  // 0 = hardware concurrency
  const corruption::SeverityLadder* ladder = nullptr;  // null = builtin
};

// Writes every image under every cell plus <out>/manifest.json. Images are
// processed in parallel; results are collected in path order, so the bytes do
// not depend on the thread count. On failure, files written by this call are
// removed before the error propagates.
Manifest write_corrupted_dataset(const AnnotationSet& ann, const std::vector<Cell>& cells,
                                 const fs::path& out_dir, std::uint64_t global_seed,
                                 const WriteOptions& options = {});

}  // namespace rohoi::dataset
