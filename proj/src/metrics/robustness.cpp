#include "rohoi/metrics/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "rohoi/error.hpp"

namespace rohoi::metrics {

namespace {

using ojson = nlohmann::ordered_json;

double sorted_mean(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double log_with_base(double x, double base) {
  return base > 0.0 ? std::log(x) / std::log(base) : std::log(x);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

void RobustnessMatrix::set(Kind kind, int level, double value) {
  if (level < 1 || level > corruption::kSeverityCount)
    throw Error(ErrorCode::kValidation, "level must be 1..5, got " + std::to_string(level));
  if (!(value >= 0.0 && value <= 100.0))
    throw Error(ErrorCode::kValidation, std::string(corruption::info(kind).abbrev) + " level " +
                                            std::to_string(level) + ": value outside [0, 100]");
  cells_[kind][level] = value;
}

void RobustnessMatrix::set_clean(double value) {
  if (!(value >= 0.0 && value <= 100.0))
    throw Error(ErrorCode::kValidation, "clean value outside [0, 100]");
  clean_ = value;
}

std::optional<double> RobustnessMatrix::get(Kind kind, int level) const {
  auto it = cells_.find(kind);
  if (it == cells_.end()) return std::nullopt;
  auto jt = it->second.find(level);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::vector<std::pair<Kind, int>> RobustnessMatrix::missing_cells() const {
  std::vector<std::pair<Kind, int>> out;
  for (const auto& ki : corruption::registry())
    for (int l = 1; l <= corruption::kSeverityCount; ++l)
      if (!get(ki.kind, l)) out.emplace_back(ki.kind, l);
  return out;
}

RobustnessMatrix RobustnessMatrix::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("matrix JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "matrix JSON must be an object");
  RobustnessMatrix m;
  if (j.contains("clean") && !j["clean"].is_null()) {
    if (!j["clean"].is_number()) throw Error(ErrorCode::kParse, "'clean' must be a number");
    m.set_clean(j["clean"].get<double>());
  }
  if (!j.contains("cells") || !j["cells"].is_object())
    throw Error(ErrorCode::kParse, "matrix JSON needs a 'cells' object");
  for (const auto& [name, levels] : j["cells"].items()) {
    Kind kind = corruption::require_kind(name);
    if (!levels.is_object())
      throw Error(ErrorCode::kParse, "cells." + name + " must map levels to values");
    for (const auto& [lv, v] : levels.items()) {
      int level = 0;
      try {
        std::size_t used = 0;
        level = std::stoi(lv, &used);
        if (used != lv.size()) throw std::invalid_argument(lv);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParse, "cells." + name + ": bad level '" + lv + "'");
      }
      if (!v.is_number())
        throw Error(ErrorCode::kParse, "cells." + name + "." + lv + " must be a number");
      m.set(kind, level, v.get<double>());
    }
  }
  return m;
}

std::string RobustnessMatrix::to_json() const {
  ojson j;
  j["clean"] = clean_ ? ojson(*clean_) : ojson(nullptr);
  ojson cells = ojson::object();
  for (const auto& [kind, levels] : cells_) {
    ojson lv = ojson::object();
    for (const auto& [l, v] : levels) lv[std::to_string(l)] = v;
    cells[std::string(corruption::info(kind).abbrev)] = lv;
  }
  j["cells"] = cells;
  return j.dump(2);
}

double mri(const RobustnessMatrix& m) {
  if (m.empty()) throw Error(ErrorCode::kInvalidArgument, "MRI of an empty matrix");
  std::vector<double> means;
  for (const auto& [kind, levels] : m.cells()) {
    if (levels.empty()) continue;
    std::vector<double> v;
    for (const auto& [l, x] : levels) v.push_back(x);
    means.push_back(sorted_mean(v));
  }
  if (means.empty()) throw Error(ErrorCode::kInvalidArgument, "MRI of an empty matrix");
  return sorted_mean(means);
}

CorruptionStats corruption_stats(const std::map<int, double>& levels, double log_base) {
  if (levels.empty()) throw Error(ErrorCode::kInvalidArgument, "corruption has no levels");
  std::vector<double> v;
  for (const auto& [l, x] : levels) v.push_back(x);
  CorruptionStats s;
  s.mean = sorted_mean(v);
  std::vector<double> sq;
  for (double x : v) sq.push_back((x - s.mean) * (x - s.mean));
  s.stddev = std::sqrt(sorted_mean(sq));
  s.penalty = 1.0 / (log_with_base(1.0 + s.stddev, log_base) + 1.0);
  return s;
}

double cri(const RobustnessMatrix& m, double log_base) {
  if (!m.clean() || !(*m.clean() > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "CRI needs a positive clean score");
  if (m.empty()) throw Error(ErrorCode::kInvalidArgument, "CRI of an empty matrix");
  std::vector<double> terms;
  for (const auto& [kind, levels] : m.cells()) {
    if (levels.empty()) continue;
    CorruptionStats s = corruption_stats(levels, log_base);
    terms.push_back(s.mean / *m.clean() * s.penalty);
  }
  return sorted_mean(terms);
}

Report build_report(const RobustnessMatrix& m, const ReportOptions& opt) {
  Report r;
  r.mri = mri(m);
  for (const auto& [kind, levels] : m.cells())
    if (!levels.empty()) r.per_corruption[kind] = corruption_stats(levels, opt.log_base);
  if (m.clean() && *m.clean() > 0.0) {
    r.cri = cri(m, opt.log_base);
  } else if (opt.require_cri) {
    throw Error(ErrorCode::kValidation, "CRI requested but the matrix has no positive clean score");
  } else {
    r.warnings.push_back("no positive clean score; CRI omitted");
  }
  auto missing = m.missing_cells();
  if (!missing.empty())
    r.warnings.push_back(std::to_string(missing.size()) + " of 100 cells missing");
  return r;
}

std::string report_json(const RobustnessMatrix& m, const Report& r) {
  ojson j;
  j["matrix"] = ojson::parse(m.to_json())["cells"];
  j["clean"] = m.clean() ? ojson(*m.clean()) : ojson(nullptr);
  j["mri"] = r.mri;
  j["cri"] = r.cri ? ojson(*r.cri) : ojson(nullptr);
  ojson per = ojson::object();
  for (const auto& [kind, s] : r.per_corruption)
    per[std::string(corruption::info(kind).abbrev)] = {
        {"mean", s.mean}, {"std", s.stddev}, {"penalty", s.penalty}};
  j["per_corruption"] = per;
  ojson missing = ojson::array();
  for (const auto& [kind, l] : m.missing_cells())
    missing.push_back(std::string(corruption::info(kind).abbrev) + "/" + std::to_string(l));
  j["missing_cells"] = missing;
  j["warnings"] = r.warnings;
  return j.dump(2);
}

std::string report_text(const RobustnessMatrix& m, const Report& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-4s %7s %7s %7s %7s %7s %8s %7s %8s\n", "kind", "fam",
                "L1", "L2", "L3", "L4", "L5", "mean", "std", "penalty");
  out += line;
  for (const auto& ki : corruption::registry()) {
    auto it = r.per_corruption.find(ki.kind);
    if (it == r.per_corruption.end()) continue;
    std::snprintf(line, sizeof line, "%-6s %-4s", std::string(ki.abbrev).c_str(),
                  std::string(corruption::family_abbrev(ki.family)).c_str());
    out += line;
    for (int l = 1; l <= corruption::kSeverityCount; ++l) {
      auto v = m.get(ki.kind, l);
      out += v ? fmt(" %7.2f", *v) : std::string("       -");
    }
    out += fmt(" %8.2f", it->second.mean) + fmt(" %7.3f", it->second.stddev) +
           fmt(" %8.4f", it->second.penalty) + "\n";
  }
  out += m.clean() ? fmt("clean  %.2f\n", *m.clean()) : std::string("clean  -\n");
  out += fmt("MRI    %.2f\n", r.mri);
  out += r.cri ? fmt("CRI    %.4f\n", *r.cri) : std::string("CRI    -\n");
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace rohoi::metrics
