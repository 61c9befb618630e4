#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rohoi/corruption/kinds.hpp"

namespace rohoi::metrics {

using corruption::Kind;

// mAP per (corruption, level) plus the clean score, all in [0, 100].
class RobustnessMatrix {
 public:
  // Throws kValidation for a value outside [0, 100] or a level outside 1..5.
  void set(Kind kind, int level, double value);
  void set_clean(double value);

  std::optional<double> get(Kind kind, int level) const;
  const std::optional<double>& clean() const noexcept { return clean_; }
  const std::map<Kind, std::map<int, double>>& cells() const noexcept { return cells_; }
  bool empty() const noexcept { return cells_.empty(); }
  bool complete() const { return missing_cells().empty(); }
  // Cells absent from the full 20 x 5 grid, in registry order.
  std::vector<std::pair<Kind, int>> missing_cells() const;

  // {"clean": x, "cells": {"MB": {"1": v, ...}, ...}}; kinds by abbreviation or slug.
  static RobustnessMatrix from_json(const std::string& text);
  std::string to_json() const;

 private:
  std::optional<double> clean_;
  std::map<Kind, std::map<int, double>> cells_;
};

// Mean over corruptions of the mean over their present levels.
// Throws kInvalidArgument on an empty matrix.
double mri(const RobustnessMatrix& m);

struct CorruptionStats {
  double mean = 0;
  double stddev = 0;   // population
  double penalty = 1;  // 1 / (log(1 + stddev) + 1)
};

// log_base <= 0 selects the natural log.
CorruptionStats corruption_stats(const std::map<int, double>& levels, double log_base = 0.0);

// Mean over corruptions of (mean / clean) * penalty. Throws
// kInvalidArgument when the clean score is missing or not positive, or the
// matrix is empty.
double cri(const RobustnessMatrix& m, double log_base = 0.0);

struct ReportOptions {
  double log_base = 0.0;
  // Without a clean score the report leaves CRI out and adds a warning;
  // with require_cri that case throws kValidation instead.
  bool require_cri = false;
};

struct Report {
  double mri = 0;
  std::optional<double> cri;
  std::map<Kind, CorruptionStats> per_corruption;
  std::vector<std::string> warnings;
};

Report build_report(const RobustnessMatrix& m, const ReportOptions& options = {});

// {matrix, clean, mri, cri, per_corruption: {kind: {mean, std, penalty}},
//  missing_cells, warnings}.
std::string report_json(const RobustnessMatrix& m, const Report& r);
// Fixed-width table, one row per corruption, then MRI and CRI.
std::string report_text(const RobustnessMatrix& m, const Report& r);

}  // namespace rohoi::metrics
