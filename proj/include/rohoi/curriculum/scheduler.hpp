#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rohoi/masking/mask.hpp"

namespace rohoi::curriculum {

using masking::MaskLevel;

// How S for the masked candidate sums the memory bank.
enum class ScoreSum {
  kMaskedLevels,  // N(ω2) + N(ω3) + N(ω4)
  kAllLevels,     // N(ω1) + ... + N(ω4)
};

struct SchedulerConfig {
  double tau_init = 0.15;
  double epsilon = 1e-6;
  ScoreSum score_sum = ScoreSum::kMaskedLevels;
  // With a flat score the threshold collapses to 0 and `|dQ| < tau` can never
  // hold. When set, an exact zero change counts as stagnation and upgrades.
  bool zero_change_upgrades = true;
};

struct SchedulerState {
  int p = 2;
  std::array<long long, 4> n = {1, 1, 1, 1};  // N(ω1)..N(ω4)
  double dq_max = -std::numeric_limits<double>::infinity();
  // Scores observed in the previous epoch, by level; empty when that level
  // was not evaluated.
  std::array<std::optional<double>, 4> last_q;
  int epoch = 0;

  long long count(MaskLevel l) const { return n[static_cast<std::size_t>(masking::level_index(l) - 1)]; }
  long long total() const { return n[0] + n[1] + n[2] + n[3]; }
  MaskLevel current() const { return masking::level_from_index(p); }
};

struct TraceRecord {
  int t = 0;
  MaskLevel chosen = MaskLevel::kClean;  // level trained this epoch
  int p = 2;                             // after the update
  std::array<long long, 4> n{};          // after the update
  std::optional<double> dq;
  std::optional<double> tau;
  double q_clean = 0;
  double q_p = 0;
  bool upgraded = false;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

// (q_curr - q_prev) / q_prev. Throws kUndefinedBaseline when q_prev <= 0.
double relative_change(double q_prev, double q_curr);

// tau_init * dq_max / (|dq| + epsilon).
double dynamic_threshold(double tau_init, double dq_max, double dq, double epsilon);

// S for ω1 or the current ω_p; throws kInvalidLevel for any other level.
double severity_score(const SchedulerState& state, MaskLevel level, double q,
                      ScoreSum sum = ScoreSum::kMaskedLevels);

enum class Candidate { kClean, kCurrent };

// argmin of the two scores; ties go to the clean level.
Candidate select_level(double s_clean, double s_p);

class Scheduler {
 public:
  explicit Scheduler(SchedulerConfig config = {});
  Scheduler(SchedulerConfig config, SchedulerState state);

  // One epoch given Q(ω1) and Q(ω_p) at the current ω_p.
  TraceRecord step(double q_clean, double q_p);

  const SchedulerState& state() const noexcept { return state_; }
  const SchedulerConfig& config() const noexcept { return config_; }

 private:
  SchedulerConfig config_;
  SchedulerState state_;
};

// Q_ω(t), with t counted from 1.
using Evaluator = std::function<double(MaskLevel level, int epoch)>;

// T epochs; throws kInvalidArgument for T < 1.
std::vector<TraceRecord> run(const Evaluator& evaluator, int epochs,
                             const SchedulerConfig& config = {});

// {"t", "chosen", "p", "N", "dQ", "tau", "q_clean", "q_p", "upgraded"}.
std::string trace_record_json(const TraceRecord& r);
std::string trace_jsonl(const std::vector<TraceRecord>& trace);

}  // namespace rohoi::curriculum
