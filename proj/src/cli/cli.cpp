#include "rohoi/cli/cli.hpp"

#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rohoi/config/ladder_file.hpp"
#include "rohoi/corruption/ladder.hpp"
#include "rohoi/curriculum/evaluators.hpp"
#include "rohoi/curriculum/scheduler.hpp"
#include "rohoi/dataset/dataset.hpp"
#include "rohoi/error.hpp"
#include "rohoi/masking/mask.hpp"
#include "rohoi/metrics/robustness.hpp"
#include "rohoi/raster/image_io.hpp"
#include "rohoi/util/parallel.hpp"

namespace rohoi::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Common {
  std::string format = "text";
  int threads = 0;
  std::uint64_t seed = 0;
  std::string ladder;
};

struct Ladders {
  config::LadderFile file;
  corruption::SeverityLadder severity;
  masking::MaskLadder mask;
};

Ladders load_ladders(const Common& c) {
  fs::path path = c.ladder.empty() ? config::ladder_path_from_env() : fs::path(c.ladder);
  config::LadderFile file = path.empty() ? config::LadderFile::builtin()
                                         : config::LadderFile::load(path);
  corruption::SeverityLadder sev(file);
  masking::MaskLadder mask =
      file.has_section("mask") ? masking::MaskLadder::from_file(file) : masking::MaskLadder();
  return {file, sev, mask};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// "1..5", "2,4", "w1..w3".
std::vector<int> parse_range_list(const std::string& text, int lo, int hi, const char* what) {
  auto num = [&](std::string s) {
    if (!s.empty() && (s[0] == 'w' || s[0] == 'W')) s = s.substr(1);
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used == s.size() && v >= lo && v <= hi) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::kConfig, std::string("bad ") + what + " '" + text + "' (allowed " +
                                        std::to_string(lo) + ".." + std::to_string(hi) + ")");
  };
  std::set<int> out;
  for (const auto& part : split(text, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.insert(num(part));
      continue;
    }
    int a = num(part.substr(0, dots));
    int b = num(part.substr(dots + 2));
    if (b < a) throw Error(ErrorCode::kConfig, std::string("empty ") + what + " range '" + part + "'");
    for (int v = a; v <= b; ++v) out.insert(v);
  }
  if (out.empty()) throw Error(ErrorCode::kConfig, std::string("no ") + what + " selected");
  return {out.begin(), out.end()};
}

std::vector<corruption::Kind> parse_kinds(const std::string& text) {
  if (text.empty() || text == "all") {
    std::vector<corruption::Kind> all;
    for (const auto& ki : corruption::registry()) all.push_back(ki.kind);
    return all;
  }
  std::vector<corruption::Kind> out;
  for (const auto& name : split(text, ',')) {
    auto k = corruption::require_kind(name);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

void require_format(const Common& c) {
  if (c.format != "text" && c.format != "json")
    throw Error(ErrorCode::kConfig, "--format must be text or json");
}

std::string text_of(const fs::path& p) {
  auto bytes = raster::read_file_bytes(p);
  return std::string(bytes.begin(), bytes.end());
}

// ---- corrupt ----

struct CorruptArgs {
  std::string annotations, out, kinds = "all", levels = "1..5";
};

int cmd_corrupt(const Common& c, const CorruptArgs& a, std::ostream& out, std::ostream& err) {
  require_format(c);
  auto ladders = load_ladders(c);
  auto kinds = parse_kinds(a.kinds);
  auto levels = parse_range_list(a.levels, 1, corruption::kSeverityCount, "levels");
  std::vector<dataset::Cell> cells;
  for (auto k : kinds)
    for (int l : levels) cells.push_back({k, l});
  auto ann = dataset::load_annotations(a.annotations);
  dataset::WriteOptions opt{c.threads, &ladders.severity};
  err << "corrupting " << ann.images.size() << " image(s) x " << cells.size() << " cell(s)\n";
  auto manifest = dataset::write_corrupted_dataset(ann, cells, a.out, c.seed, opt);
  const std::string mpath = (fs::path(a.out) / "manifest.json").string();
  if (c.format == "json") {
    ojson j;
    j["files"] = manifest.records.size();
    j["manifest"] = mpath;
    j["manifest_sha256"] = manifest.hash();
    j["ladder_hash"] = manifest.ladder_hash;
    j["seed"] = c.seed;
    out << j.dump(2) << "\n";
  } else {
    out << "files            " << manifest.records.size() << "\n"
        << "manifest         " << mpath << "\n"
        << "manifest_sha256  " << manifest.hash() << "\n"
        << "ladder_hash      " << manifest.ladder_hash << "\n";
  }
  return kExitOk;
}

// ---- mask ----

struct MaskArgs {
  std::string annotations, out, levels = "1..4", masks;
  bool single = false;
};

int cmd_mask(const Common& c, const MaskArgs& a, std::ostream& out, std::ostream&) {
  require_format(c);
  auto ladders = load_ladders(c);
  auto levels = parse_range_list(a.levels, 1, masking::kLevelCount, "mask levels");
  auto ann = dataset::load_annotations(a.annotations);
  const auto mode = a.single ? masking::MaskMode::kSingle : masking::MaskMode::kUnion;

  struct Row {
    std::uint64_t id;
    int level;
    std::size_t masked;
    std::size_t pixels;
  };
  std::vector<std::vector<Row>> rows(ann.images.size());
  util::parallel_for(ann.images.size(), c.threads, [&](std::size_t i) {
    const auto& rec = ann.images[i];
    const fs::path src = ann.image_path(rec);
    auto instances = dataset::image_instances(ann, rec, a.masks);
    raster::ImageBuffer img;
    for (int l : levels) {
      auto level = masking::level_from_index(l);
      fs::path dir = fs::path(a.out) / masking::level_name(level);
      const std::string stem = std::to_string(rec.id);
      if (level == masking::MaskLevel::kClean) {
        // Unmasked level: the source bytes are passed through untouched.
        auto bytes = raster::read_file_bytes(src);
        raster::write_file_bytes(dir / (stem + src.extension().string()), bytes);
        masking::write_mask_png(dir / (stem + "_mask.png"), masking::BinaryMask(rec.width, rec.height));
        rows[i].push_back({rec.id, l, 0, std::size_t(rec.width) * rec.height});
        continue;
      }
      if (instances.empty())
        throw Error(ErrorCode::kValidation,
                    "image " + stem + " has no instance masks or boxes to mask");
      if (img.empty()) {
        img = raster::read_image(src);
        if (img.width() != rec.width || img.height() != rec.height)
          throw Error(ErrorCode::kValidation, "image " + stem + " size differs from its annotation");
      }
      auto m = masking::build_image_mask(rec.width, rec.height, instances, level, ladders.mask,
                                         c.seed, rec.id, mode);
      raster::write_png(dir / (stem + ".png"), masking::apply_mask(img, m));
      masking::write_mask_png(dir / (stem + "_mask.png"), m);
      rows[i].push_back({rec.id, l, m.count(), m.width() * static_cast<std::size_t>(m.height())});
    }
  });

  ojson j = ojson::array();
  std::ostringstream text;
  text << "image        level  masked_fraction\n";
  for (const auto& per : rows)
    for (const auto& r : per) {
      double frac = r.pixels ? static_cast<double>(r.masked) / r.pixels : 0.0;
      j.push_back({{"image_id", r.id}, {"level", "w" + std::to_string(r.level)},
                   {"masked_pixels", r.masked}, {"masked_fraction", frac}});
      char line[96];
      std::snprintf(line, sizeof line, "%-12llu w%-5d %.4f\n",
                    static_cast<unsigned long long>(r.id), r.level, frac);
      text << line;
    }
  if (c.format == "json") out << ojson{{"outputs", j}, {"seed", c.seed}}.dump(2) << "\n";
  else out << text.str();
  return kExitOk;
}

// ---- evaluate / report ----

struct ReportArgs {
  bool require_cri = false;
  double log_base = 0.0;
  std::string report_out;
};

int emit_report(const Common& c, const ReportArgs& r, const metrics::RobustnessMatrix& m,
                std::ostream& out, std::ostream& err) {
  metrics::ReportOptions opt{r.log_base, r.require_cri};
  auto report = metrics::build_report(m, opt);
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  std::string json = metrics::report_json(m, report);
  if (!r.report_out.empty())
    raster::write_file_bytes(r.report_out, {reinterpret_cast<const std::uint8_t*>(json.data()),
                                            json.size()});
  if (c.format == "json") out << json << "\n";
  else out << metrics::report_text(m, report);
  return kExitOk;
}

struct EvaluateArgs {
  std::string annotations, dets, mode;
  int scenario = 2;
  bool strict = false;
};

int cmd_evaluate(const Common& c, const EvaluateArgs& a, const ReportArgs& r, std::ostream& out,
                 std::ostream& err) {
  require_format(c);
  std::optional<dataset::Mode> mode;
  if (!a.mode.empty()) {
    mode = dataset::parse_mode(a.mode);
    if (!mode) throw Error(ErrorCode::kConfig, "--mode must be hico-det or v-coco");
  }
  auto ann = dataset::load_annotations(a.annotations, mode);
  auto score = [&](const fs::path& file) {
    auto load = dataset::load_detections(file, a.strict);
    for (const auto& e : load.errors)
      err << "warning: " << file.string() << ": line " << e.line << ": " << e.message << "\n";
    if (ann.mode == dataset::Mode::kHicoDet)
      return metrics::hico_map(load.detections, ann.gts, ann.rare).full;
    metrics::VcocoOptions vo;
    vo.scenario = a.scenario;
    return metrics::vcoco_ap_role(load.detections, ann.gts, vo);
  };
  metrics::RobustnessMatrix m;
  const fs::path root(a.dets);
  if (fs::exists(root / "clean.jsonl")) m.set_clean(score(root / "clean.jsonl"));
  for (const auto& ki : corruption::registry())
    for (int l = 1; l <= corruption::kSeverityCount; ++l) {
      fs::path f = root / std::string(ki.slug) / (std::to_string(l) + ".jsonl");
      if (fs::exists(f)) m.set(ki.kind, l, score(f));
    }
  if (m.empty())
    throw Error(ErrorCode::kValidation, "no corruption detections found under " + a.dets);
  if (r.require_cri && !m.clean())
    throw Error(ErrorCode::kValidation, "CRI requested but " + (root / "clean.jsonl").string() +
                                            " is missing");
  return emit_report(c, r, m, out, err);
}

int cmd_report(const Common& c, const std::string& matrix, const ReportArgs& r, std::ostream& out,
               std::ostream& err) {
  require_format(c);
  auto m = metrics::RobustnessMatrix::from_json(text_of(matrix));
  return emit_report(c, r, m, out, err);
}

// ---- curriculum-sim ----

struct SimArgs {
  int epochs = 0;
  std::string family = "constant", replay, trace_out, score_sum = "masked";
  double q = 50.0, slope = 0.5, noise = 1.0, plateau = 60.0, rise = 10.0;
  double tau_init = 0.15, epsilon = 1e-6;
  bool literal = false;
};

int cmd_curriculum(const Common& c, const SimArgs& a, std::ostream& out, std::ostream&) {
  require_format(c);
  if (a.epochs < 1) throw Error(ErrorCode::kConfig, "--epochs must be >= 1");
  curriculum::SchedulerConfig cfg;
  cfg.tau_init = a.tau_init;
  cfg.epsilon = a.epsilon;
  cfg.zero_change_upgrades = !a.literal;
  if (a.score_sum == "masked") cfg.score_sum = curriculum::ScoreSum::kMaskedLevels;
  else if (a.score_sum == "all") cfg.score_sum = curriculum::ScoreSum::kAllLevels;
  else throw Error(ErrorCode::kConfig, "--score-sum must be masked or all");

  curriculum::Evaluator eval;
  if (!a.replay.empty()) {
    eval = curriculum::replay_evaluator(curriculum::parse_replay(text_of(a.replay)));
  } else if (a.family == "constant") {
    eval = curriculum::constant_evaluator(a.q);
  } else if (a.family == "linear") {
    eval = curriculum::linear_evaluator(a.q, a.slope);
  } else if (a.family == "noisy-plateau") {
    eval = curriculum::noisy_plateau_evaluator(a.plateau, a.rise, a.noise, c.seed);
  } else {
    throw Error(ErrorCode::kConfig, "--family must be constant, linear or noisy-plateau");
  }
  auto trace = curriculum::run(eval, a.epochs, cfg);
  std::string jsonl = curriculum::trace_jsonl(trace);

  const auto& last = trace.back();
  ojson summary;
  summary["epochs"] = a.epochs;
  summary["final_p"] = last.p;
  summary["N"] = last.n;
  ojson ups = ojson::array();
  for (const auto& rec : trace)
    if (rec.upgraded) ups.push_back(rec.t);
  summary["upgrade_epochs"] = ups;

  if (!a.trace_out.empty()) {
    raster::write_file_bytes(a.trace_out, {reinterpret_cast<const std::uint8_t*>(jsonl.data()),
                                           jsonl.size()});
  }
  if (c.format == "json") {
    if (a.trace_out.empty()) out << jsonl;
    out << ojson{{"summary", summary}}.dump() << "\n";
  } else {
    if (a.trace_out.empty()) out << jsonl;
    out << "# final_p " << last.p << "\n# N " << last.n[0] << " " << last.n[1] << " "
        << last.n[2] << " " << last.n[3] << "\n# upgrade_epochs";
    for (const auto& u : ups) out << " " << u.get<int>();
    out << "\n";
  }
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kRegistry:
    case ErrorCode::kInvalidLevel:
      return kExitConfig;
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kValidation:
    case ErrorCode::kParse:
    case ErrorCode::kVocabulary:
      return kExitValidation;
    default:
      return kExitFailure;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rohoi: corruption benchmark synthesis, HOI robustness metrics, and "
               "progressive masking schedules"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Corruption kinds by family:\n" + corruption::describe_registry() +
             "\nExit codes: 0 ok, 1 failure, 2 config, 3 IO, 4 validation.\n"
             "ROHOI_LADDER sets the default severity-ladder file.");

  Common common;
  app.add_option("--format", common.format, "Output format: text or json");
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  app.add_option("--seed", common.seed, "Global seed (default 0)");
  app.add_option("--ladder", common.ladder, "Severity-ladder config file");

  CorruptArgs ca;
  auto* corrupt = app.add_subcommand("corrupt", "Write corrupted copies of a dataset");
  corrupt->add_option("--annotations", ca.annotations, "Annotation JSON")->required();
  corrupt->add_option("--out", ca.out, "Output directory")->required();
  corrupt->add_option("--kinds", ca.kinds, "Comma-separated kinds or 'all'");
  corrupt->add_option("--levels", ca.levels, "Severities, e.g. 1..5 or 1,3");

  MaskArgs ma;
  auto* mask = app.add_subcommand("mask", "Write semantically masked images per level");
  mask->add_option("--annotations", ma.annotations, "Annotation JSON")->required();
  mask->add_option("--out", ma.out, "Output directory")->required();
  mask->add_option("--levels", ma.levels, "Mask levels, e.g. w1..w4 or 2,4");
  mask->add_option("--masks", ma.masks, "Directory of <image_id>_<instance_id>.png masks");
  mask->add_flag("--single-instance", ma.single, "Mask one instance per image instead of all");

  ReportArgs ra;
  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "Score detections per cell and report MRI/CRI");
  evaluate->add_option("--annotations", ea.annotations, "Annotation JSON")->required();
  evaluate->add_option("--dets", ea.dets,
                       "Directory with clean.jsonl and <kind>/<level>.jsonl")->required();
  evaluate->add_option("--mode", ea.mode, "hico-det or v-coco (default: from annotations)");
  evaluate->add_option("--scenario", ea.scenario, "V-COCO role scenario (1 or 2)");
  evaluate->add_flag("--strict", ea.strict, "Abort on the first malformed detection line");

  std::string matrix;
  auto* report = app.add_subcommand("report", "Report MRI/CRI from a robustness matrix JSON");
  report->add_option("--matrix", matrix, "Matrix JSON {clean, cells}")->required();

  for (auto* sub : {evaluate, report}) {
    sub->add_flag("--cri", ra.require_cri, "Fail when CRI cannot be computed");
    sub->add_option("--log-base", ra.log_base, "Log base for the CRI penalty (default e)");
    sub->add_option("--report-out", ra.report_out, "Also write the JSON report here");
  }

  SimArgs sa;
  auto* sim = app.add_subcommand("curriculum-sim", "Run the progressive scheduler on a score source");
  sim->add_option("--epochs,-T", sa.epochs, "Number of epochs")->required();
  sim->add_option("--family", sa.family, "constant, linear or noisy-plateau");
  sim->add_option("--replay", sa.replay, "JSONL or CSV with t, q_clean, q_p");
  sim->add_option("--q", sa.q, "Base score (constant, linear)");
  sim->add_option("--slope", sa.slope, "Per-epoch gain (linear)");
  sim->add_option("--plateau", sa.plateau, "Asymptote (noisy-plateau)");
  sim->add_option("--rise", sa.rise, "Rise time in epochs (noisy-plateau)");
  sim->add_option("--noise", sa.noise, "Score jitter std (noisy-plateau)");
  sim->add_option("--tau-init", sa.tau_init, "Initial threshold");
  sim->add_option("--epsilon", sa.epsilon, "Threshold guard");
  sim->add_option("--score-sum", sa.score_sum, "masked (w2..w4) or all (w1..w4)");
  sim->add_flag("--literal-threshold", sa.literal,
                "Do not treat a zero score change as stagnation");
  sim->add_option("--trace-out", sa.trace_out, "Write the JSONL trace here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (*corrupt) return cmd_corrupt(common, ca, out, err);
    if (*mask) return cmd_mask(common, ma, out, err);
    if (*evaluate) return cmd_evaluate(common, ea, ra, out, err);
    if (*report) return cmd_report(common, matrix, ra, out, err);
    if (*sim) return cmd_curriculum(common, sa, out, err);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    if (e.code() == ErrorCode::kRegistry) err << corruption::describe_registry() << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error (io): " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace rohoi::cli
