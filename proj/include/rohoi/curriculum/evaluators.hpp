#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "rohoi/curriculum/scheduler.hpp"

namespace rohoi::curriculum {

// Same score for every level and epoch.
Evaluator constant_evaluator(double q);

// q0 + slope * (t - 1), minus drop * (level - 1) for masked levels.
Evaluator linear_evaluator(double q0, double slope, double level_drop = 0.0);

// q0 * (1 + rate)^(t - 1) for every level.
Evaluator growth_evaluator(double q0, double rate);

// Saturating curve toward `plateau` with Gaussian jitter. The jitter for a
// (t, level) pair is drawn from its own stream, so query order is irrelevant.
Evaluator noisy_plateau_evaluator(double plateau, double rise_epochs, double noise,
                                  std::uint64_t seed, double level_drop = 2.0);

struct ReplayRow {
  int t = 0;
  double q_clean = 0;
  double q_p = 0;
};

// JSON Lines objects with t, q_clean, q_p, or CSV with a header naming those
// columns. Lines starting with '#' and {"summary": ...} objects are skipped.
// Throws kParse with the line number.
std::vector<ReplayRow> parse_replay(std::string_view text);

// ω1 reads q_clean, every other level q_p. Throws kValidation for a missing epoch.
Evaluator replay_evaluator(std::vector<ReplayRow> rows);

}  // namespace rohoi::curriculum
