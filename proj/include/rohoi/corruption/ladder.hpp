#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "rohoi/config/ladder_file.hpp"
#include "rohoi/corruption/kinds.hpp"

namespace rohoi::corruption {

enum class Trend {
  kIncreasing,  // larger value = stronger degradation
  kDecreasing,  // smaller value = stronger degradation
  kConstant,    // single value, not laddered
};

struct ParamSpec {
  std::string_view name;
  Trend trend;
  bool integer = false;
  bool odd = false;
  double min = 0.0;  // inclusive lower bound
  double max = 1e9;  // inclusive upper bound
};

// Schema of the parameters each kind reads from its ladder section.
std::vector<ParamSpec> param_schema(Kind kind);

// Validated per-kind parameter vectors. Every laddered vector is strictly
// monotone in its declared degradation direction.
class SeverityLadder {
 public:
  // Throws kConfig naming the offending section/key.
  explicit SeverityLadder(const config::LadderFile& file);
  static const SeverityLadder& builtin();

  // severity is 1-based.
  double value(Kind kind, std::string_view param, int severity) const;
  int int_value(Kind kind, std::string_view param, int severity) const;
  double constant(Kind kind, std::string_view param) const;
  const std::string& units(Kind kind) const { return units_[kind_id(kind)]; }

  const std::string& hash() const noexcept { return hash_; }
  int version() const noexcept { return version_; }

 private:
  const std::vector<double>& lookup(Kind kind, std::string_view param) const;

  std::array<std::vector<std::pair<std::string, std::vector<double>>>, kKindCount>
      params_;
  std::array<std::string, kKindCount> units_;
  std::string hash_;
  int version_ = 0;
};

void require_severity(int severity);

}  // namespace rohoi::corruption
