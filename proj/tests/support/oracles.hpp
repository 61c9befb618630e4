#pragma once

// Slow, direct reimplementations used to cross-check the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rohoi/masking/mask.hpp"
#include "rohoi/metrics/hoi.hpp"

namespace rohoi::testing {

// ---- scheduler ----

struct RefEpoch {
  int chosen = 1;  // level index 1..4
  int p = 2;
  std::array<long long, 4> n{};
  bool upgraded = false;
  bool has_dq = false;
  double dq = 0, dq_max = 0, tau = 0;
};

// Straight-line transcription of the progressive schedule.
inline std::vector<RefEpoch> reference_schedule(const std::function<double(int, int)>& q, int T,
                                                double tau_init = 0.15, double eps = 1e-6,
                                                bool sum_all_levels = false,
                                                bool zero_change_upgrades = true) {
  long long N[5] = {0, 1, 1, 1, 1};
  int p = 2;
  double dq_max = -std::numeric_limits<double>::infinity();
  double prev_qp = 0.0;
  int prev_level = 0;
  std::vector<RefEpoch> out;
  for (int t = 1; t <= T; ++t) {
    RefEpoch e;
    double qc = q(1, t);
    double qp = q(p, t);
    long long bank = N[2] + N[3] + N[4] + (sum_all_levels ? N[1] : 0);
    double s_p = bank * qp;
    double s_1 = N[1] * qc;
    int evaluated = p;
    if (s_p < s_1) {
      if (prev_level == p && prev_qp > 0) {
        double dq = (qp - prev_qp) / prev_qp;
        dq_max = std::max(dq_max, std::fabs(dq));
        double tau = tau_init * dq_max / (std::fabs(dq) + eps);
        e.has_dq = true;
        e.dq = dq;
        e.dq_max = dq_max;
        e.tau = tau;
        bool stagnant = std::fabs(dq) < tau || (zero_change_upgrades && dq == 0.0);
        if (stagnant && p < 4) {
          p = p + 1;
          dq_max = -std::numeric_limits<double>::infinity();
          e.upgraded = true;
        }
      }
      N[p] += 1;
      e.chosen = p;
    } else {
      N[1] += 1;
      e.chosen = 1;
    }
    prev_qp = qp;
    prev_level = evaluated;
    e.p = p;
    e.n = {N[1], N[2], N[3], N[4]};
    out.push_back(e);
  }
  return out;
}

// ---- average precision ----

// PR points recomputed from scratch at every distinct score threshold; area
// summed over recall steps using the best precision at or beyond each step.
inline std::optional<double> brute_force_ap(const std::vector<metrics::Labeled>& dets,
                                            std::size_t n_gt) {
  if (n_gt == 0) return dets.empty() ? std::nullopt : std::optional<double>(0.0);
  std::set<double> thresholds;
  for (const auto& d : dets) thresholds.insert(d.score);
  std::vector<std::pair<double, double>> pr;  // (recall, precision)
  for (double s : thresholds) {
    std::size_t kept = 0, tp = 0;
    for (const auto& d : dets)
      if (d.score >= s) {
        ++kept;
        tp += d.tp;
      }
    pr.emplace_back(double(tp) / n_gt, double(tp) / kept);
  }
  std::set<double> recalls;
  for (const auto& [r, p] : pr) recalls.insert(r);
  double area = 0, prev = 0;
  for (double r : recalls) {
    double best = 0;
    for (const auto& [rr, pp] : pr)
      if (rr >= r) best = std::max(best, pp);
    area += (r - prev) * best;
    prev = r;
  }
  return area;
}

// Greedy matching of one class, rerun from scratch for the prefix kept at a
// threshold; returns the TP count.
inline std::size_t brute_force_tp_at(const std::vector<metrics::Detection>& preds,
                                     const std::vector<metrics::GroundTruth>& gts, double s,
                                     double thresh = 0.5) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (preds[i].score >= s) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });
  std::vector<bool> used(gts.size(), false);
  std::size_t tp = 0;
  for (std::size_t i : idx) {
    const auto& d = preds[i];
    int best = -1;
    double best_ov = 0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || gts[g].image_id != d.image_id) continue;
      double o = (d.object && gts[g].object) ? metrics::iou(*d.object, *gts[g].object)
                 : (!d.object && !gts[g].object) ? 1.0
                                                 : 0.0;
      double ov = std::min(metrics::iou(d.human, gts[g].human), o);
      if (ov >= thresh && (best < 0 || ov > best_ov)) {
        best = static_cast<int>(g);
        best_ov = ov;
      }
    }
    if (best >= 0) {
      used[static_cast<std::size_t>(best)] = true;
      ++tp;
    }
  }
  return tp;
}

// Single-class AP from brute-force matching at every threshold.
inline std::optional<double> brute_force_class_ap(const std::vector<metrics::Detection>& preds,
                                                  const std::vector<metrics::GroundTruth>& gts) {
  if (gts.empty()) return preds.empty() ? std::nullopt : std::optional<double>(0.0);
  std::set<double> thresholds;
  for (const auto& d : preds) thresholds.insert(d.score);
  std::vector<std::pair<double, double>> pr;
  for (double s : thresholds) {
    std::size_t kept = 0;
    for (const auto& d : preds) kept += d.score >= s;
    std::size_t tp = brute_force_tp_at(preds, gts, s);
    pr.emplace_back(double(tp) / gts.size(), double(tp) / kept);
  }
  std::set<double> recalls;
  for (const auto& [r, p] : pr) recalls.insert(r);
  double area = 0, prev = 0;
  for (double r : recalls) {
    double best = 0;
    for (const auto& [rr, pp] : pr)
      if (rr >= r) best = std::max(best, pp);
    area += (r - prev) * best;
    prev = r;
  }
  return area;
}

// ---- masks ----

// Minkowski sum with a (2r+1) square, by direct neighbourhood search.
inline masking::BinaryMask brute_force_dilate(const masking::BinaryMask& m, int r) {
  masking::BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      bool hit = false;
      for (int dy = -r; dy <= r && !hit; ++dy)
        for (int dx = -r; dx <= r && !hit; ++dx)
          hit = m.contains(x + dx, y + dy) && m.get(x + dx, y + dy);
      if (hit) out.set(x, y);
    }
  return out;
}

// Intersection of all supporting half-planes through pairs of set pixels.
// Only the row extremes are used as candidates; interior row pixels are
// convex combinations of them.
inline masking::BinaryMask brute_force_hull(const masking::BinaryMask& m) {
  struct P {
    long long x, y;
  };
  std::vector<P> pts;
  for (int y = 0; y < m.height(); ++y) {
    int lo = -1, hi = -1;
    for (int x = 0; x < m.width(); ++x)
      if (m.get(x, y)) {
        if (lo < 0) lo = x;
        hi = x;
      }
    if (lo >= 0) {
      pts.push_back({lo, y});
      if (hi != lo) pts.push_back({hi, y});
    }
  }
  auto cross = [](P o, P a, P b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
  std::vector<std::pair<P, P>> planes;
  bool collinear = true;
  for (const P& a : pts)
    for (const P& b : pts) {
      if (a.x == b.x && a.y == b.y) continue;
      bool support = true;
      bool any_off = false;
      for (const P& c : pts) {
        long long v = cross(a, b, c);
        if (v < 0) support = false;
        if (v != 0) any_off = true;
      }
      if (any_off) collinear = false;
      if (support) planes.push_back({a, b});
    }
  masking::BinaryMask out(m.width(), m.height());
  long long x0 = 1 << 30, x1 = -1, y0 = 1 << 30, y1 = -1;
  for (const P& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      P q{x, y};
      if (q.x < x0 || q.x > x1 || q.y < y0 || q.y > y1) continue;
      bool in = true;
      if (collinear) {
        if (pts.size() > 1) in = cross(pts[0], pts[1], q) == 0;
      } else {
        for (const auto& [a, b] : planes)
          if (cross(a, b, q) < 0) {
            in = false;
            break;
          }
      }
      if (in) out.set(x, y);
    }
  return out;
}

}  // namespace rohoi::testing
