#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "json.hpp"
#include "rohoi/error.hpp"
#include "rohoi/metrics/hoi.hpp"
#include "rohoi/metrics/robustness.hpp"
#include "support/oracles.hpp"

namespace {

using namespace rohoi::metrics;
using rohoi::Error;
using rohoi::ErrorCode;
using rohoi::corruption::registry;
namespace rt = rohoi::testing;

GroundTruth gt(std::uint64_t img, Box h, std::optional<Box> o, int obj, int verb) {
  return {img, h, o, obj, verb};
}
Detection det(const GroundTruth& g, double score) {
  return {g.image_id, g.human, g.object, g.object_category, g.verb, score};
}

// ---- IoU and AP ----

TEST(Iou, HandCases) {
  Box a{0, 0, 2, 2}, b{1, 0, 2, 2}, c{5, 5, 1, 1};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(iou(a, c), 0.0);
  EXPECT_NEAR(iou(a, b), 2.0 / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(iou(Box{0, 0, 0, 0}, Box{0, 0, 0, 0}), 0.0);
}

TEST(Ap, HandCases) {
  EXPECT_DOUBLE_EQ(*ap({{0.9, true}}, 1), 1.0);
  EXPECT_DOUBLE_EQ(*ap({{0.9, false}, {0.8, true}}, 1), 0.5);
  EXPECT_FALSE(ap({}, 0));
  EXPECT_DOUBLE_EQ(*ap({{0.3, false}}, 0), 0.0);
  EXPECT_DOUBLE_EQ(*ap({}, 3), 0.0);
  // Eleven-point: recall 1 reached at precision 0.5.
  EXPECT_NEAR(*ap({{0.9, false}, {0.8, true}}, 1, Interpolation::kElevenPoint), 0.5, 1e-12);
}

TEST(Ap, TieOrderIrrelevant) {
  std::vector<Labeled> a{{0.5, true}, {0.5, false}, {0.5, false}, {0.4, true}};
  std::vector<Labeled> b{{0.5, false}, {0.5, false}, {0.5, true}, {0.4, true}};
  std::sort(a.begin(), a.end(), [](auto& x, auto& y) { return x.tp < y.tp; });
  EXPECT_DOUBLE_EQ(*ap(a, 3), *ap(b, 3));
  std::vector<Labeled> perm = b;
  std::sort(perm.begin(), perm.end(), [](auto& x, auto& y) { return x.tp > y.tp; });
  do {
    EXPECT_NEAR(*ap(perm, 3), *rt::brute_force_ap(perm, 3), 1e-12);
  } while (std::next_permutation(perm.begin(), perm.end(),
                                 [](auto& x, auto& y) { return x.tp > y.tp; }));
}

TEST(Ap, MonotoneRescalingInvariant) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Labeled> l, l2;
    for (int i = 0; i < 12; ++i) {
      double s = std::round(u(g) * 6) / 6;
      bool tp = u(g) < 0.5;
      l.push_back({s, tp});
      l2.push_back({std::exp(3 * s) - 7, tp});
    }
    // n_gt must be at least the TP count.
    EXPECT_NEAR(*ap(l, 14), *ap(l2, 14), 1e-12);
    EXPECT_NEAR(*ap(l, 14), *rt::brute_force_ap(l, 14), 1e-12);
    double v = *ap(l, 14);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

// ---- matching ----

TEST(Match, ExactPredictionIsTp) {
  auto g = gt(1, {0, 0, 10, 10}, Box{20, 20, 5, 5}, 3, 2);
  auto m = match_triplets({det(g, 0.7)}, {g});
  ASSERT_EQ(m.size(), 1u);
  const auto& cm = m.at({2, 3});
  EXPECT_TRUE(cm.labeled[0].tp);
  EXPECT_EQ(cm.matched_gt[0], 0);
}

TEST(Match, DuplicatePredictionIsFp) {
  auto g = gt(1, {0, 0, 10, 10}, Box{20, 20, 5, 5}, 3, 2);
  auto m = match_triplets({det(g, 0.4), det(g, 0.9)}, {g});
  const auto& cm = m.at({2, 3});
  ASSERT_EQ(cm.labeled.size(), 2u);
  EXPECT_EQ(cm.labeled[0].score, 0.9);
  EXPECT_TRUE(cm.labeled[0].tp);
  EXPECT_FALSE(cm.labeled[1].tp);
}

TEST(Match, MinIouRule) {
  auto g = gt(1, {0, 0, 10, 10}, Box{20, 20, 10, 10}, 3, 2);
  auto d = det(g, 0.9);
  d.human = {0, 0, 10, 9};        // IoU 0.9
  d.object = Box{26, 20, 10, 10};  // IoU 4/16 = 0.25
  auto m = match_triplets({d}, {g});
  EXPECT_FALSE(m.at({2, 3}).labeled[0].tp);
}

TEST(Match, OtherImageOrClassNeverMatches) {
  auto g = gt(1, {0, 0, 10, 10}, Box{20, 20, 5, 5}, 3, 2);
  auto d1 = det(g, 0.9);
  d1.image_id = 2;
  auto d2 = det(g, 0.8);
  d2.verb = 5;
  auto m = match_triplets({d1, d2}, {g});
  EXPECT_FALSE(m.at({2, 3}).labeled[0].tp);
  EXPECT_FALSE(m.at({5, 3}).labeled[0].tp);
  EXPECT_EQ(m.at({5, 3}).n_gt, 0u);
}

TEST(Match, HigherOverlapWinsThenLowerIndex) {
  auto g0 = gt(1, {0, 0, 10, 10}, Box{20, 20, 10, 10}, 0, 0);
  auto g1 = gt(1, {1, 0, 10, 10}, Box{21, 20, 10, 10}, 0, 0);
  auto d = det(g1, 0.9);
  auto m = match_triplets({d}, {g0, g1});
  EXPECT_EQ(m.at({0, 0}).matched_gt[0], 1);
  auto twin = match_triplets({det(g0, 0.9)}, {g0, g0});
  EXPECT_EQ(twin.at({0, 0}).matched_gt[0], 0);
}

// ---- HICO-DET ----

TEST(Hico, PerfectAndEmpty) {
  std::vector<GroundTruth> gts;
  for (int i = 0; i < 12; ++i) gts.push_back(gt(i, {0, 0, 10, 10}, Box{5, 5, 10, 10}, 0, 0));
  gts.push_back(gt(0, {30, 30, 10, 10}, Box{50, 50, 4, 4}, 1, 1));
  std::vector<Detection> perfect;
  for (const auto& g : gts) perfect.push_back(det(g, 1.0));
  auto r = hico_map(perfect, gts);
  EXPECT_DOUBLE_EQ(r.full, 100);
  EXPECT_DOUBLE_EQ(r.rare, 100);
  EXPECT_DOUBLE_EQ(r.non_rare, 100);
  EXPECT_EQ(r.n_classes, 2u);
  EXPECT_EQ(r.n_rare, 1u);
  auto e = hico_map({}, gts);
  EXPECT_DOUBLE_EQ(e.full, 0);
  EXPECT_DOUBLE_EQ(e.rare, 0);
  EXPECT_DOUBLE_EQ(e.non_rare, 0);
}

TEST(Hico, ThreeClassHandFixture) {
  // Class A (verb 0): 2 GTs, preds TP 0.9, FP 0.8, TP 0.7 -> AP = 0.5*1 + 0.5*(2/3).
  // Class B (verb 1): 1 GT, preds FP 0.9, TP 0.6 -> AP = 0.5.
  // Class C (verb 2): 1 GT, no preds -> AP = 0.
  std::vector<GroundTruth> gts{gt(1, {0, 0, 10, 10}, Box{20, 0, 10, 10}, 0, 0),
                               gt(2, {0, 0, 10, 10}, Box{20, 0, 10, 10}, 0, 0),
                               gt(1, {40, 40, 10, 10}, Box{60, 40, 10, 10}, 0, 1),
                               gt(3, {0, 0, 10, 10}, Box{20, 0, 10, 10}, 0, 2)};
  auto fp = [](Detection d) {
    d.human = {90, 90, 5, 5};
    return d;
  };
  std::vector<Detection> preds{det(gts[0], 0.9), fp(det(gts[0], 0.8)), det(gts[1], 0.7),
                               fp(det(gts[2], 0.9)), det(gts[2], 0.6)};
  std::set<HoiClass> rare{{1, 0}, {2, 0}};
  auto r = hico_map(preds, gts, rare);
  double a = 0.5 + 0.5 * (2.0 / 3.0), b = 0.5, c = 0.0;
  EXPECT_NEAR(r.full, 100 * (a + b + c) / 3, 1e-9);
  EXPECT_NEAR(r.rare, 100 * (b + c) / 2, 1e-9);
  EXPECT_NEAR(r.non_rare, 100 * a, 1e-9);
}

TEST(Hico, RareFromCounts) {
  std::vector<GroundTruth> gts;
  for (int i = 0; i < 10; ++i) gts.push_back(gt(i, {0, 0, 1, 1}, Box{0, 0, 1, 1}, 0, 0));
  for (int i = 0; i < 9; ++i) gts.push_back(gt(i, {0, 0, 1, 1}, Box{0, 0, 1, 1}, 1, 0));
  auto rare = rare_classes_from_counts(gts);
  EXPECT_FALSE(rare.contains({0, 0}));
  EXPECT_TRUE(rare.contains({0, 1}));
}

// ---- V-COCO ----

TEST(Vcoco, PerfectBothScenarios) {
  std::vector<GroundTruth> gts{gt(1, {0, 0, 10, 10}, Box{20, 0, 10, 10}, 2, 0),
                               gt(1, {0, 0, 10, 10}, std::nullopt, -1, 1)};
  std::vector<Detection> preds{det(gts[0], 0.9), det(gts[1], 0.8)};
  for (int s : {1, 2}) {
    VcocoOptions o;
    o.scenario = s;
    EXPECT_DOUBLE_EQ(vcoco_ap_role(preds, gts, o), 100.0) << s;
  }
}

TEST(Vcoco, WrongBoxOnPresentRole) {
  std::vector<GroundTruth> gts{gt(1, {0, 0, 10, 10}, Box{20, 0, 10, 10}, 2, 0)};
  auto d = det(gts[0], 0.9);
  d.object = Box{60, 60, 10, 10};
  VcocoOptions s1, s2, lenient;
  s1.scenario = 1;
  s2.scenario = 2;
  lenient.scenario = 1;
  lenient.lenient_scenario1 = true;
  EXPECT_DOUBLE_EQ(vcoco_ap_role({d}, gts, s1), 0.0);
  EXPECT_DOUBLE_EQ(vcoco_ap_role({d}, gts, s2), 0.0);
  EXPECT_DOUBLE_EQ(vcoco_ap_role({d}, gts, lenient), 100.0);
}

TEST(Vcoco, MissingRole) {
  std::vector<GroundTruth> gts{gt(1, {0, 0, 10, 10}, std::nullopt, -1, 0)};
  auto empty = det(gts[0], 0.9);
  auto boxed = det(gts[0], 0.9);
  boxed.object = Box{30, 30, 5, 5};
  VcocoOptions s1, s2;
  s1.scenario = 1;
  EXPECT_DOUBLE_EQ(vcoco_ap_role({empty}, gts, s1), 100.0);
  EXPECT_DOUBLE_EQ(vcoco_ap_role({empty}, gts, s2), 100.0);
  EXPECT_DOUBLE_EQ(vcoco_ap_role({boxed}, gts, s1), 100.0);
  EXPECT_DOUBLE_EQ(vcoco_ap_role({boxed}, gts, s2), 0.0);
  VcocoOptions bad;
  bad.scenario = 3;
  EXPECT_THROW(vcoco_ap_role({}, gts, bad), Error);
}

// ---- MRI / CRI ----

RobustnessMatrix two_kinds() {
  RobustnessMatrix m;
  double a[] = {10, 8, 6, 4, 2};
  for (int l = 1; l <= 5; ++l) {
    m.set(registry()[0].kind, l, a[l - 1]);
    m.set(registry()[1].kind, l, 20);
  }
  return m;
}

TEST(Mri, Examples) {
  EXPECT_DOUBLE_EQ(mri(two_kinds()), 13.0);
  RobustnessMatrix c;
  for (const auto& ki : registry())
    for (int l = 1; l <= 5; ++l) c.set(ki.kind, l, 42.5);
  EXPECT_NEAR(mri(c), 42.5, 1e-12);
  EXPECT_TRUE(c.complete());
  EXPECT_THROW(mri(RobustnessMatrix{}), Error);
}

TEST(Mri, PartialLevelsAverageWhatIsPresent) {
  RobustnessMatrix m;
  m.set(registry()[0].kind, 1, 10);
  m.set(registry()[0].kind, 3, 30);
  m.set(registry()[5].kind, 2, 40);
  EXPECT_DOUBLE_EQ(mri(m), 30.0);
  EXPECT_EQ(m.missing_cells().size(), 97u);
}

TEST(Cri, ZeroVarianceFixedPoint) {
  RobustnessMatrix m;
  m.set_clean(37.0);
  for (const auto& ki : registry())
    for (int l = 1; l <= 5; ++l) m.set(ki.kind, l, 37.0);
  EXPECT_NEAR(cri(m), 1.0, 1e-12);
}

TEST(Cri, WorkedScalar) {
  RobustnessMatrix m;
  double a[] = {10, 8, 6, 4, 2};
  for (int l = 1; l <= 5; ++l) m.set(registry()[0].kind, l, a[l - 1]);
  m.set_clean(20);
  auto st = corruption_stats(m.cells().begin()->second);
  EXPECT_DOUBLE_EQ(st.mean, 6.0);
  EXPECT_NEAR(st.stddev, std::sqrt(8.0), 1e-12);
  EXPECT_NEAR(cri(m), 0.12808, 1e-4);
  EXPECT_NEAR(cri(m), 0.3 / (std::log(1 + std::sqrt(8.0)) + 1), 1e-12);
  EXPECT_NEAR(cri(m, 10.0), 0.3 / (std::log10(1 + std::sqrt(8.0)) + 1), 1e-12);
}

TEST(Cri, PenaltyDecreasesWithSpread) {
  double prev = 2.0;
  for (double sigma : {0.0, 1.0, 5.0}) {
    std::map<int, double> lv{{1, 50 - sigma}, {2, 50 + sigma}};
    auto st = corruption_stats(lv);
    EXPECT_NEAR(st.stddev, sigma, 1e-12);
    EXPECT_LT(st.penalty, prev);
    EXPECT_LE(st.penalty, 1.0);
    prev = st.penalty;
  }
}

TEST(Cri, RequiresPositiveClean) {
  auto m = two_kinds();
  EXPECT_THROW(cri(m), Error);
  m.set_clean(0);
  try {
    cri(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Matrix, RangeChecks) {
  RobustnessMatrix m;
  EXPECT_THROW(m.set(registry()[0].kind, 1, 100.5), Error);
  EXPECT_THROW(m.set(registry()[0].kind, 6, 10), Error);
  EXPECT_THROW(m.set_clean(-1), Error);
}

TEST(Matrix, JsonRoundTrip) {
  auto m = two_kinds();
  m.set_clean(21.5);
  m.set(rohoi::corruption::Kind::kSaltPepper, 2, 33.25);
  auto back = RobustnessMatrix::from_json(m.to_json());
  EXPECT_EQ(back.cells(), m.cells());
  EXPECT_EQ(back.clean(), m.clean());
  auto slug = RobustnessMatrix::from_json(R"({"cells": {"SP": {"1": 5}, "S&P": {"2": 7}}})");
  EXPECT_EQ(slug.get(rohoi::corruption::Kind::kSaltPepper, 1), 5.0);
  EXPECT_EQ(slug.get(rohoi::corruption::Kind::kSaltPepper, 2), 7.0);
  EXPECT_THROW(RobustnessMatrix::from_json(R"({"cells": {"XX": {"1": 5}}})"), Error);
}

TEST(Report, WarnsWithoutClean) {
  auto m = two_kinds();
  auto r = build_report(m);
  EXPECT_FALSE(r.cri);
  bool clean_warned = false;
  for (const auto& w : r.warnings) clean_warned |= w.find("clean") != std::string::npos;
  EXPECT_TRUE(clean_warned);
  EXPECT_DOUBLE_EQ(r.mri, 13.0);
  ReportOptions strict;
  strict.require_cri = true;
  try {
    build_report(m, strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
  m.set_clean(20);
  auto full = build_report(m);
  ASSERT_TRUE(full.cri);
  auto j = nlohmann::json::parse(report_json(m, full));
  for (const char* k : {"matrix", "clean", "mri", "cri", "per_corruption"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_TRUE(j["per_corruption"]["MB"].contains("penalty"));
  auto text = report_text(m, full);
  EXPECT_NE(text.find("MRI"), std::string::npos);
  EXPECT_NE(text.find("CRI"), std::string::npos);
}

}  // namespace
