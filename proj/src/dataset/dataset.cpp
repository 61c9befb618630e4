#include "rohoi/dataset/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "rohoi/corruption/corrupt.hpp"
#include "rohoi/error.hpp"
#include "rohoi/raster/image_io.hpp"
#include "rohoi/util/hash.hpp"
#include "rohoi/util/parallel.hpp"

namespace rohoi::dataset {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string read_text(const fs::path& path) {
  auto bytes = raster::read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, what + ": parse error at byte " + std::to_string(e.byte) +
                                       ": " + e.what());
  }
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorCode::kParse, where + ": missing '" + key + "'");
  return j[key];
}

std::uint64_t as_id(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw Error(ErrorCode::kParse, where + ": image id must be a non-negative integer");
  return v.get<std::uint64_t>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw Error(ErrorCode::kParse, where + ": expected an integer");
  return v.get<int>();
}

metrics::Box as_box(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4)
    throw Error(ErrorCode::kParse, where + ": box must be [x, y, w, h]");
  double c[4];
  for (int i = 0; i < 4; ++i) {
    if (!v[i].is_number()) throw Error(ErrorCode::kParse, where + ": box values must be numbers");
    c[i] = v[i].get<double>();
    if (!std::isfinite(c[i])) throw Error(ErrorCode::kParse, where + ": box values must be finite");
  }
  if (c[2] < 0 || c[3] < 0)
    throw Error(ErrorCode::kValidation, where + ": box has negative width or height");
  return {c[0], c[1], c[2], c[3]};
}

json box_json(const metrics::Box& b) { return json::array({b.x, b.y, b.w, b.h}); }

std::vector<std::string> as_names(const json& v, const std::string& where) {
  if (!v.is_array()) throw Error(ErrorCode::kParse, where + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& n : v) {
    if (!n.is_string()) throw Error(ErrorCode::kParse, where + " must contain strings");
    out.push_back(n.get<std::string>());
  }
  return out;
}

masking::Rect clip_to_image(const metrics::Box& b, int w, int h) {
  double x0 = std::clamp(b.x, 0.0, double(w));
  double y0 = std::clamp(b.y, 0.0, double(h));
  double x1 = std::clamp(b.x + b.w, 0.0, double(w));
  double y1 = std::clamp(b.y + b.h, 0.0, double(h));
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace

std::string_view mode_name(Mode m) { return m == Mode::kHicoDet ? "hico-det" : "v-coco"; }

std::optional<Mode> parse_mode(std::string_view t) {
  if (t == "hico-det" || t == "hico" || t == "HICO-DET") return Mode::kHicoDet;
  if (t == "v-coco" || t == "vcoco" || t == "V-COCO") return Mode::kVcoco;
  return std::nullopt;
}

const ImageRecord* AnnotationSet::find_image(std::uint64_t id) const {
  for (const auto& img : images)
    if (img.id == id) return &img;
  return nullptr;
}

AnnotationSet parse_annotations(std::string_view text, const fs::path& root,
                                std::optional<Mode> mode) {
  json j = parse_json(text, "annotations");
  if (!j.is_object()) throw Error(ErrorCode::kParse, "annotations: top level must be an object");
  AnnotationSet ann;
  ann.root = root;
  std::optional<Mode> file_mode;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw Error(ErrorCode::kParse, "annotations: 'mode' must be a string");
    file_mode = parse_mode(j["mode"].get<std::string>());
    if (!file_mode)
      throw Error(ErrorCode::kParse, "annotations: unknown mode '" + j["mode"].get<std::string>() + "'");
  }
  if (file_mode && mode && *file_mode != *mode)
    throw Error(ErrorCode::kValidation, "annotations are " + std::string(mode_name(*file_mode)) +
                                            " but " + std::string(mode_name(*mode)) + " was requested");
  ann.mode = file_mode ? *file_mode : mode.value_or(Mode::kHicoDet);

  ann.verbs = j.contains("verbs") ? as_names(j["verbs"], "verbs") : std::vector<std::string>{};
  ann.objects = j.contains("objects") ? as_names(j["objects"], "objects") : std::vector<std::string>{};

  const json& images = need(j, "images", "annotations");
  if (!images.is_array()) throw Error(ErrorCode::kParse, "annotations: 'images' must be an array");
  std::set<std::uint64_t> ids;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const json& im = images[i];
    ImageRecord rec;
    rec.id = as_id(need(im, "id", where), where);
    const json& file = need(im, "file", where);
    if (!file.is_string()) throw Error(ErrorCode::kParse, where + ": 'file' must be a string");
    rec.file = file.get<std::string>();
    rec.width = as_int(need(im, "width", where), where);
    rec.height = as_int(need(im, "height", where), where);
    if (rec.width < 1 || rec.height < 1)
      throw Error(ErrorCode::kValidation, where + ": image size must be positive");
    if (!ids.insert(rec.id).second)
      throw Error(ErrorCode::kValidation, where + ": duplicate image id " + std::to_string(rec.id));
    ann.images.push_back(rec);
  }

  const json empty = json::array();
  const json& annots = j.contains("annotations") ? j["annotations"] : empty;
  if (!annots.is_array()) throw Error(ErrorCode::kParse, "annotations: 'annotations' must be an array");
  for (std::size_t i = 0; i < annots.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const json& a = annots[i];
    GroundTruth g;
    g.image_id = as_id(need(a, "image_id", where), where);
    if (!ids.contains(g.image_id))
      throw Error(ErrorCode::kValidation,
                  where + ": references missing image_id " + std::to_string(g.image_id));
    g.human = as_box(need(a, "human_box", where), where + ".human_box");
    if (a.contains("object_box") && !a["object_box"].is_null())
      g.object = as_box(a["object_box"], where + ".object_box");
    g.verb = as_int(need(a, "verb", where), where + ".verb");
    if (a.contains("object_category") && !a["object_category"].is_null()) {
      g.object_category = as_int(a["object_category"], where + ".object_category");
    } else if (g.object) {
      throw Error(ErrorCode::kParse, where + ": missing 'object_category'");
    } else {
      g.object_category = -1;
    }
    if (g.verb < 0 || static_cast<std::size_t>(g.verb) >= ann.verbs.size())
      throw Error(ErrorCode::kVocabulary, where + ": verb " + std::to_string(g.verb) +
                                              " outside the verb vocabulary");
    bool roleless = !g.object && g.object_category == -1;
    if (!roleless && (g.object_category < 0 ||
                      static_cast<std::size_t>(g.object_category) >= ann.objects.size()))
      throw Error(ErrorCode::kVocabulary, where + ": object category " +
                                              std::to_string(g.object_category) +
                                              " outside the object vocabulary");
    ann.gts.push_back(g);
  }

  if (j.contains("rare_classes")) {
    const json& rc = j["rare_classes"];
    if (!rc.is_array()) throw Error(ErrorCode::kParse, "rare_classes must be an array");
    for (const auto& pair : rc) {
      if (!pair.is_array() || pair.size() != 2)
        throw Error(ErrorCode::kParse, "rare_classes entries must be [verb, object]");
      ann.rare.insert({as_int(pair[0], "rare_classes"), as_int(pair[1], "rare_classes")});
    }
  } else if (ann.mode == Mode::kHicoDet) {
    ann.rare = metrics::rare_classes_from_counts(ann.gts);
  }
  return ann;
}

AnnotationSet load_annotations(const fs::path& path, std::optional<Mode> mode) {
  return parse_annotations(read_text(path), path.parent_path(), mode);
}

std::string annotations_to_json(const AnnotationSet& ann) {
  ojson j;
  j["mode"] = mode_name(ann.mode);
  ojson images = ojson::array();
  for (const auto& im : ann.images)
    images.push_back({{"id", im.id}, {"file", im.file}, {"width", im.width}, {"height", im.height}});
  j["images"] = images;
  j["verbs"] = ann.verbs;
  j["objects"] = ann.objects;
  ojson annots = ojson::array();
  for (const auto& g : ann.gts) {
    ojson a;
    a["image_id"] = g.image_id;
    a["human_box"] = box_json(g.human);
    a["object_box"] = g.object ? box_json(*g.object) : json(nullptr);
    a["object_category"] = g.object_category >= 0 ? json(g.object_category) : json(nullptr);
    a["verb"] = g.verb;
    annots.push_back(a);
  }
  j["annotations"] = annots;
  ojson rare = ojson::array();
  for (const auto& c : ann.rare) rare.push_back({c.verb, c.object_category});
  j["rare_classes"] = rare;
  return j.dump(2);
}

std::vector<masking::InstanceMask> image_instances(const AnnotationSet& ann,
                                                   const ImageRecord& img,
                                                   const fs::path& mask_dir) {
  std::vector<metrics::Box> boxes;
  auto add = [&](const metrics::Box& b) {
    if (b.empty()) return;
    if (std::find(boxes.begin(), boxes.end(), b) == boxes.end()) boxes.push_back(b);
  };
  for (const auto& g : ann.gts) {
    if (g.image_id != img.id) continue;
    add(g.human);
    if (g.object) add(*g.object);
  }
  std::vector<masking::InstanceMask> out;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    masking::Rect r = clip_to_image(boxes[i], img.width, img.height);
    fs::path file;
    if (!mask_dir.empty())
      file = mask_dir / (std::to_string(img.id) + "_" + std::to_string(i) + ".png");
    if (!file.empty() && fs::exists(file)) {
      out.push_back({masking::read_mask_png(file, img.width, img.height), r});
    } else {
      out.push_back(masking::instance_from_box(img.width, img.height, r));
    }
  }
  return out;
}

DetectionLoad parse_detections(std::string_view text, bool strict) {
  DetectionLoad out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line, nullptr, true, false);
      const std::string where = "line " + std::to_string(line_no);
      Detection d;
      d.image_id = as_id(need(j, "image_id", where), where);
      d.human = as_box(need(j, "human_box", where), where + " human_box");
      if (j.contains("object_box") && !j["object_box"].is_null())
        d.object = as_box(j["object_box"], where + " object_box");
      d.object_category = j.contains("object_category") && !j["object_category"].is_null()
                              ? as_int(j["object_category"], where)
                              : -1;
      d.verb = as_int(need(j, "verb", where), where);
      const json& s = need(j, "score", where);
      if (!s.is_number()) throw Error(ErrorCode::kParse, where + ": score must be a number");
      d.score = s.get<double>();
      if (!std::isfinite(d.score)) throw Error(ErrorCode::kParse, where + ": score must be finite");
      out.detections.push_back(d);
    } catch (const json::exception& e) {
      LineError err{line_no, e.what()};
      if (strict) throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
      out.errors.push_back(err);
    } catch (const Error& e) {
      if (strict) throw Error(ErrorCode::kParse, e.what());
      out.errors.push_back({line_no, e.what()});
    }
  }
  return out;
}

DetectionLoad load_detections(const fs::path& path, bool strict) {
  return parse_detections(read_text(path), strict);
}

std::string detection_to_json(const Detection& d) {
  ojson j;
  j["image_id"] = d.image_id;
  j["human_box"] = box_json(d.human);
  j["object_box"] = d.object ? box_json(*d.object) : json(nullptr);
  j["object_category"] = d.object_category;
  j["verb"] = d.verb;
  j["score"] = d.score;
  return j.dump();
}

void write_detections(const fs::path& path, const std::vector<Detection>& dets) {
  std::string text;
  for (const auto& d : dets) text += detection_to_json(d) + "\n";
  raster::write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string Manifest::to_json() const {
  ojson j;
  j["version"] = 1;
  j["ladder_hash"] = ladder_hash;
  j["global_seed"] = global_seed;
  ojson recs = ojson::object();
  for (const auto& [path, r] : records)
    recs[path] = {{"image_id", r.image_id}, {"kind", r.kind},   {"severity", r.severity},
                  {"seed", r.seed},         {"ladder_hash", r.ladder_hash}, {"sha256", r.sha256}};
  j["records"] = recs;
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view text) {
  json j = parse_json(text, "manifest");
  Manifest m;
  m.ladder_hash = need(j, "ladder_hash", "manifest").get<std::string>();
  m.global_seed = need(j, "global_seed", "manifest").get<std::uint64_t>();
  for (const auto& [path, r] : need(j, "records", "manifest").items()) {
    ManifestRecord rec;
    rec.image_id = need(r, "image_id", path).get<std::uint64_t>();
    rec.kind = need(r, "kind", path).get<std::string>();
    rec.severity = need(r, "severity", path).get<int>();
    rec.seed = need(r, "seed", path).get<std::uint64_t>();
    rec.ladder_hash = need(r, "ladder_hash", path).get<std::string>();
    rec.sha256 = need(r, "sha256", path).get<std::string>();
    m.records[path] = rec;
  }
  return m;
}

std::string Manifest::hash() const { return util::sha256_hex(to_json()); }

std::vector<Cell> all_cells() {
  std::vector<Cell> out;
  for (const auto& ki : corruption::registry())
    for (int s = 1; s <= corruption::kSeverityCount; ++s) out.push_back({ki.kind, s});
  return out;
}

std::string cell_path(const Cell& cell, std::uint64_t image_id) {
  return std::string(corruption::info(cell.kind).slug) + "/" + std::to_string(cell.severity) +
         "/" + std::to_string(image_id) + ".png";
}

Manifest write_corrupted_dataset(const AnnotationSet& ann, const std::vector<Cell>& cells,
                                 const fs::path& out_dir, std::uint64_t global_seed,
                                 const WriteOptions& options) {
  const corruption::SeverityLadder& ladder =
      options.ladder ? *options.ladder : corruption::SeverityLadder::builtin();
  Manifest manifest;
  manifest.ladder_hash = ladder.hash();
  manifest.global_seed = global_seed;

  std::vector<std::vector<std::pair<std::string, ManifestRecord>>> results(ann.images.size());
  std::mutex written_mu;
  std::vector<fs::path> written;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    fs::remove(out_dir / "manifest.json", ec);
  };

  try {
    util::parallel_for(ann.images.size(), options.threads, [&](std::size_t i) {
      const ImageRecord& rec = ann.images[i];
      raster::ImageBuffer img = raster::read_image(ann.image_path(rec));
      for (const Cell& cell : cells) {
        corruption::CorruptionSpec spec{cell.kind, cell.severity, global_seed};
        auto out = corruption::apply_corruption(img, spec, rec.id, ladder);
        auto bytes = raster::encode_png(out);
        std::string rel = cell_path(cell, rec.id);
        fs::path dst = out_dir / rel;
        {
          std::lock_guard lock(written_mu);
          written.push_back(dst);
        }
        raster::write_file_bytes(dst, bytes);
        results[i].emplace_back(rel, ManifestRecord{rec.id, std::string(corruption::info(cell.kind).slug),
                                                    cell.severity, global_seed, ladder.hash(),
                                                    util::sha256_hex(bytes)});
      }
    });
    for (auto& per_image : results)
      for (auto& [path, r] : per_image) manifest.records.emplace(path, r);
    std::string text = manifest.to_json();
    raster::write_file_bytes(out_dir / "manifest.json",
                             {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  } catch (...) {
    cleanup();
    throw;
  }
  return manifest;
}

}  // namespace rohoi::dataset
