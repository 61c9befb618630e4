#include "rohoi/curriculum/scheduler.hpp"

#include <cmath>

#include "json.hpp"
#include "rohoi/error.hpp"

namespace rohoi::curriculum {

double relative_change(double q_prev, double q_curr) {
  if (!(q_prev > 0.0))
    throw Error(ErrorCode::kUndefinedBaseline, "relative change needs a positive baseline");
  return (q_curr - q_prev) / q_prev;
}

double dynamic_threshold(double tau_init, double dq_max, double dq, double epsilon) {
  return tau_init * dq_max / (std::abs(dq) + epsilon);
}

double severity_score(const SchedulerState& state, MaskLevel level, double q, ScoreSum sum) {
  if (level == MaskLevel::kClean) return static_cast<double>(state.n[0]) * q;
  if (masking::level_index(level) != state.p)
    throw Error(ErrorCode::kInvalidLevel, std::string("score requested for ") +
                                              std::string(masking::level_name(level)) +
                                              " while the current level is w" +
                                              std::to_string(state.p));
  long long total = state.n[1] + state.n[2] + state.n[3];
  if (sum == ScoreSum::kAllLevels) total += state.n[0];
  return static_cast<double>(total) * q;
}

Candidate select_level(double s_clean, double s_p) {
  return s_p < s_clean ? Candidate::kCurrent : Candidate::kClean;
}

Scheduler::Scheduler(SchedulerConfig config) : Scheduler(config, SchedulerState{}) {}

Scheduler::Scheduler(SchedulerConfig config, SchedulerState state)
    : config_(config), state_(state) {
  if (state_.p < 2 || state_.p > 4)
    throw Error(ErrorCode::kInvalidLevel, "current level must be w2..w4");
  for (long long v : state_.n)
    if (v < 1) throw Error(ErrorCode::kInvalidArgument, "memory bank counts must be >= 1");
}

TraceRecord Scheduler::step(double q_clean, double q_p) {
  if (!std::isfinite(q_clean) || !std::isfinite(q_p))
    throw Error(ErrorCode::kInvalidArgument, "evaluator returned a non-finite score");
  SchedulerState& s = state_;
  TraceRecord rec;
  rec.t = ++s.epoch;
  rec.q_clean = q_clean;
  rec.q_p = q_p;
  const int p_eval = s.p;

  double s_clean = severity_score(s, MaskLevel::kClean, q_clean, config_.score_sum);
  double s_p = severity_score(s, s.current(), q_p, config_.score_sum);
  if (select_level(s_clean, s_p) == Candidate::kCurrent) {
    const auto& prev = s.last_q[static_cast<std::size_t>(s.p - 1)];
    bool upgrade = false;
    // The first epoch at a level has no same-level predecessor.
    if (prev && *prev > 0.0) {
      double dq = relative_change(*prev, q_p);
      s.dq_max = std::max(s.dq_max, std::abs(dq));
      double tau = dynamic_threshold(config_.tau_init, s.dq_max, dq, config_.epsilon);
      rec.dq = dq;
      rec.tau = tau;
      bool below = std::abs(dq) < tau || (config_.zero_change_upgrades && dq == 0.0);
      upgrade = below && s.p < 4;
    }
    if (upgrade) {
      ++s.p;
      s.dq_max = -std::numeric_limits<double>::infinity();
      rec.upgraded = true;
    }
    ++s.n[static_cast<std::size_t>(s.p - 1)];
    rec.chosen = s.current();
  } else {
    ++s.n[0];
    rec.chosen = MaskLevel::kClean;
  }

  s.last_q = {};
  s.last_q[0] = q_clean;
  s.last_q[static_cast<std::size_t>(p_eval - 1)] = q_p;
  rec.p = s.p;
  rec.n = s.n;
  return rec;
}

std::vector<TraceRecord> run(const Evaluator& evaluator, int epochs,
                             const SchedulerConfig& config) {
  if (epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epoch count must be >= 1");
  Scheduler sched(config);
  std::vector<TraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(epochs));
  for (int t = 1; t <= epochs; ++t) {
    double q_clean = evaluator(MaskLevel::kClean, t);
    double q_p = evaluator(sched.state().current(), t);
    trace.push_back(sched.step(q_clean, q_p));
  }
  return trace;
}

std::string trace_record_json(const TraceRecord& r) {
  nlohmann::ordered_json j;
  j["t"] = r.t;
  j["chosen"] = masking::level_name(r.chosen);
  j["p"] = r.p;
  j["N"] = r.n;
  j["dQ"] = r.dq ? nlohmann::ordered_json(*r.dq) : nlohmann::ordered_json(nullptr);
  j["tau"] = r.tau ? nlohmann::ordered_json(*r.tau) : nlohmann::ordered_json(nullptr);
  j["q_clean"] = r.q_clean;
  j["q_p"] = r.q_p;
  j["upgraded"] = r.upgraded;
  return j.dump();
}

std::string trace_jsonl(const std::vector<TraceRecord>& trace) {
  std::string out;
  for (const auto& r : trace) {
    out += trace_record_json(r);
    out += '\n';
  }
  return out;
}

}  // namespace rohoi::curriculum
