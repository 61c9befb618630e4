#include "rohoi/curriculum/evaluators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "json.hpp"
#include "rohoi/error.hpp"
#include "rohoi/raster/rng.hpp"

namespace rohoi::curriculum {

namespace {

constexpr std::uint8_t kEvaluatorStreamId = 0xE0;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse,
                "replay line " + std::to_string(line) + ": bad number '" + field + "'");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Evaluator constant_evaluator(double q) {
  return [q](MaskLevel, int) { return q; };
}

Evaluator linear_evaluator(double q0, double slope, double level_drop) {
  return [=](MaskLevel l, int t) {
    return q0 + slope * (t - 1) - level_drop * (masking::level_index(l) - 1);
  };
}

Evaluator growth_evaluator(double q0, double rate) {
  return [=](MaskLevel, int t) { return q0 * std::pow(1.0 + rate, t - 1); };
}

Evaluator noisy_plateau_evaluator(double plateau, double rise_epochs, double noise,
                                  std::uint64_t seed, double level_drop) {
  return [=](MaskLevel l, int t) {
    auto s = raster::derive_stream(seed, static_cast<std::uint64_t>(t), kEvaluatorStreamId,
                                   static_cast<std::uint8_t>(masking::level_index(l)));
    double base = plateau * (1.0 - std::exp(-t / std::max(rise_epochs, 1e-9)));
    double q = base - level_drop * (masking::level_index(l) - 1) + noise * s.normal();
    return std::max(q, 0.01);
  };
}

std::vector<ReplayRow> parse_replay(std::string_view text) {
  std::vector<ReplayRow> rows;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  int col_t = -1, col_c = -1, col_p = -1;
  bool csv_header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '{') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse, "replay line " + std::to_string(line_no) + ": " + e.what());
      }
      // Summary lines written after a trace carry no epoch.
      if (j.is_object() && j.contains("summary") && !j.contains("t")) continue;
      auto num = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number())
          throw Error(ErrorCode::kParse, "replay line " + std::to_string(line_no) +
                                             ": missing numeric '" + key + "'");
        return j[key].get<double>();
      };
      rows.push_back({static_cast<int>(num("t")), num("q_clean"), num("q_p")});
      continue;
    }
    auto cells = split_csv(line);
    if (!csv_header_seen) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "t") col_t = static_cast<int>(i);
        if (cells[i] == "q_clean") col_c = static_cast<int>(i);
        if (cells[i] == "q_p") col_p = static_cast<int>(i);
      }
      if (col_t < 0 || col_c < 0 || col_p < 0)
        throw Error(ErrorCode::kParse, "replay CSV header must name t, q_clean and q_p");
      csv_header_seen = true;
      continue;
    }
    const int need = std::max({col_t, col_c, col_p});
    if (static_cast<int>(cells.size()) <= need)
      throw Error(ErrorCode::kParse, "replay line " + std::to_string(line_no) + ": too few columns");
    rows.push_back({static_cast<int>(parse_number(cells[col_t], line_no)),
                    parse_number(cells[col_c], line_no), parse_number(cells[col_p], line_no)});
  }
  return rows;
}

Evaluator replay_evaluator(std::vector<ReplayRow> rows) {
  auto table = std::make_shared<std::map<int, ReplayRow>>();
  for (const auto& r : rows) (*table)[r.t] = r;
  return [table](MaskLevel l, int t) {
    auto it = table->find(t);
    if (it == table->end())
      throw Error(ErrorCode::kValidation, "replay has no scores for epoch " + std::to_string(t));
    return l == MaskLevel::kClean ? it->second.q_clean : it->second.q_p;
  };
}

}  // namespace rohoi::curriculum
