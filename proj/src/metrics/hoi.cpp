#include "rohoi/metrics/hoi.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "rohoi/error.hpp"

namespace rohoi::metrics {

namespace {

using OverlapFn = std::function<double(const Detection&, const GroundTruth&)>;

// Indices of preds ordered by descending score, stable on input order.
std::vector<std::size_t> by_score(const std::vector<Detection>& preds,
                                  const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> order = subset;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });
  return order;
}

ClassMatches greedy_match(const std::vector<Detection>& preds,
                          const std::vector<std::size_t>& pred_idx,
                          const std::vector<GroundTruth>& gts,
                          const std::vector<std::size_t>& gt_idx, double thresh,
                          const OverlapFn& overlap) {
  ClassMatches out;
  out.n_gt = gt_idx.size();
  std::map<std::uint64_t, std::vector<std::size_t>> gts_by_image;
  for (std::size_t g : gt_idx) gts_by_image[gts[g].image_id].push_back(g);
  std::vector<bool> used(gts.size(), false);
  for (std::size_t pi : by_score(preds, pred_idx)) {
    const Detection& d = preds[pi];
    long best = -1;
    double best_ov = -1.0;
    if (auto it = gts_by_image.find(d.image_id); it != gts_by_image.end()) {
      for (std::size_t g : it->second) {
        if (used[g]) continue;
        double ov = overlap(d, gts[g]);
        // Strict > keeps the lower GT index on equal overlap.
        if (ov >= thresh && ov > best_ov) {
          best_ov = ov;
          best = static_cast<long>(g);
        }
      }
    }
    if (best >= 0) used[static_cast<std::size_t>(best)] = true;
    out.labeled.push_back({d.score, best >= 0});
    out.matched_gt.push_back(best);
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  // Sorted accumulation keeps the reduction independent of class order.
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

}  // namespace

double iou(const Box& a, const Box& b) {
  double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  double inter = ix * iy;
  double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::optional<double> ap(const std::vector<Labeled>& labeled, std::size_t n_gt,
                         Interpolation interp) {
  if (n_gt == 0) {
    if (labeled.empty()) return std::nullopt;
    return 0.0;
  }
  std::vector<Labeled> sorted = labeled;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Labeled& a, const Labeled& b) { return a.score > b.score; });
  std::vector<double> prec, rec;
  std::size_t tp = 0, seen = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    tp += sorted[i].tp ? 1 : 0;
    ++seen;
    bool group_end = i + 1 == sorted.size() || sorted[i + 1].score != sorted[i].score;
    if (!group_end) continue;
    prec.push_back(static_cast<double>(tp) / static_cast<double>(seen));
    rec.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  // Precision envelope: best precision at any recall at or beyond this point.
  for (std::size_t i = prec.size(); i-- > 1;) prec[i - 1] = std::max(prec[i - 1], prec[i]);

  if (interp == Interpolation::kElevenPoint) {
    double sum = 0.0;
    for (int k = 0; k <= 10; ++k) {
      double r = k / 10.0;
      double p = 0.0;
      for (std::size_t i = 0; i < rec.size(); ++i)
        if (rec[i] >= r - 1e-12) {
          p = prec[i];
          break;
        }
      sum += p;
    }
    return sum / 11.0;
  }
  double area = 0.0, prev_r = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    area += (rec[i] - prev_r) * prec[i];
    prev_r = rec[i];
  }
  return std::clamp(area, 0.0, 1.0);
}

std::map<HoiClass, ClassMatches> match_triplets(const std::vector<Detection>& preds,
                                                const std::vector<GroundTruth>& gts,
                                                double iou_thresh) {
  std::map<HoiClass, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < preds.size(); ++i)
    groups[{preds[i].verb, preds[i].object_category}].first.push_back(i);
  for (std::size_t i = 0; i < gts.size(); ++i)
    groups[{gts[i].verb, gts[i].object_category}].second.push_back(i);

  OverlapFn overlap = [](const Detection& d, const GroundTruth& g) {
    double h = iou(d.human, g.human);
    double o;
    if (g.object && d.object) o = iou(*d.object, *g.object);
    else o = (!g.object && !d.object) ? 1.0 : 0.0;
    return std::min(h, o);
  };
  std::map<HoiClass, ClassMatches> out;
  for (const auto& [cls, idx] : groups)
    out.emplace(cls, greedy_match(preds, idx.first, gts, idx.second, iou_thresh, overlap));
  return out;
}

std::set<HoiClass> rare_classes_from_counts(const std::vector<GroundTruth>& gts,
                                            std::size_t threshold) {
  std::map<HoiClass, std::size_t> counts;
  for (const auto& g : gts) ++counts[{g.verb, g.object_category}];
  std::set<HoiClass> rare;
  for (const auto& [cls, n] : counts)
    if (n < threshold) rare.insert(cls);
  return rare;
}

HicoResult hico_map(const std::vector<Detection>& preds, const std::vector<GroundTruth>& gts,
                    const std::optional<std::set<HoiClass>>& rare, Interpolation interp) {
  const std::set<HoiClass> rare_set = rare ? *rare : rare_classes_from_counts(gts);
  auto matches = match_triplets(preds, gts);
  std::vector<double> all, r, nr;
  for (const auto& [cls, m] : matches) {
    if (m.n_gt == 0) continue;
    double v = ap(m.labeled, m.n_gt, interp).value_or(0.0);
    all.push_back(v);
    (rare_set.contains(cls) ? r : nr).push_back(v);
  }
  HicoResult res;
  res.n_classes = all.size();
  res.n_rare = r.size();
  res.full = 100.0 * mean_of(all);
  res.rare = 100.0 * mean_of(r);
  res.non_rare = 100.0 * mean_of(nr);
  return res;
}

double vcoco_ap_role(const std::vector<Detection>& preds, const std::vector<GroundTruth>& gts,
                     const VcocoOptions& opt) {
  if (opt.scenario != 1 && opt.scenario != 2)
    throw Error(ErrorCode::kInvalidArgument, "V-COCO scenario must be 1 or 2");
  std::map<int, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < preds.size(); ++i) groups[preds[i].verb].first.push_back(i);
  for (std::size_t i = 0; i < gts.size(); ++i) groups[gts[i].verb].second.push_back(i);

  OverlapFn overlap = [&](const Detection& d, const GroundTruth& g) {
    double h = iou(d.human, g.human);
    bool pred_empty = !d.object || d.object->empty();
    double o;
    if (!g.object) {
      o = (opt.scenario == 1 || pred_empty) ? 1.0 : 0.0;
    } else if (opt.scenario == 1 && opt.lenient_scenario1) {
      o = 1.0;
    } else {
      o = pred_empty ? 0.0 : iou(*d.object, *g.object);
    }
    return std::min(h, o);
  };
  std::vector<double> aps;
  for (const auto& [verb, idx] : groups) {
    if (idx.second.empty()) continue;
    auto m = greedy_match(preds, idx.first, gts, idx.second, opt.iou_thresh, overlap);
    aps.push_back(ap(m.labeled, m.n_gt, opt.interp).value_or(0.0));
  }
  return 100.0 * mean_of(aps);
}

}  // namespace rohoi::metrics
