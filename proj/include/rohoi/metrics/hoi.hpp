#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace rohoi::metrics {

// (x, y) top-left, continuous pixel units.
struct Box {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;
  double area() const { return w > 0 && h > 0 ? w * h : 0.0; }
  bool empty() const { return !(w > 0 && h > 0); }
  friend bool operator==(const Box&, const Box&) = default;
};

// Intersection over union; 0 when the union has no area.
double iou(const Box& a, const Box& b);

struct Detection {
  std::uint64_t image_id = 0;
  Box human;
  std::optional<Box> object;
  int object_category = 0;
  int verb = 0;
  double score = 0;
};

struct GroundTruth {
  std::uint64_t image_id = 0;
  Box human;
  std::optional<Box> object;  // absent for V-COCO roles without an object
  int object_category = 0;
  int verb = 0;
};

struct Labeled {
  double score = 0;
  bool tp = false;
};

enum class Interpolation { kAllPoint, kElevenPoint };

// Precision/recall points are taken at each distinct score, so the result
// does not depend on the order of tied detections. nullopt when n_gt = 0 and
// there are no detections; 0 when n_gt = 0 and there are.
std::optional<double> ap(const std::vector<Labeled>& labeled, std::size_t n_gt,
                         Interpolation interp = Interpolation::kAllPoint);

struct HoiClass {
  int verb = 0;
  int object_category = 0;
  auto operator<=>(const HoiClass&) const = default;
};

struct ClassMatches {
  std::vector<Labeled> labeled;  // in matching order
  std::size_t n_gt = 0;
  // For each entry in labeled, the matched GT's index into the input, or -1.
  std::vector<long> matched_gt;
};

// Greedy one-to-one matching per (verb, object) class. Predictions are taken
// by descending score (input order among ties); each takes the unmatched GT
// in the same image with the highest min(human IoU, object IoU) >= thresh,
// lower GT index on equal overlap. A missing object box matches only a
// missing object box.
std::map<HoiClass, ClassMatches> match_triplets(const std::vector<Detection>& preds,
                                                const std::vector<GroundTruth>& gts,
                                                double iou_thresh = 0.5);

struct HicoResult {
  double full = 0;      // percent
  double rare = 0;      // percent; 0 when no class is rare
  double non_rare = 0;  // percent; 0 when every class is rare
  std::size_t n_classes = 0;
  std::size_t n_rare = 0;
};

inline constexpr std::size_t kRareThreshold = 10;

// Classes with fewer than 10 training instances are rare.
std::set<HoiClass> rare_classes_from_counts(const std::vector<GroundTruth>& gts,
                                            std::size_t threshold = kRareThreshold);

// Mean AP over every class with at least one GT. rare defaults to
// rare_classes_from_counts(gts).
HicoResult hico_map(const std::vector<Detection>& preds, const std::vector<GroundTruth>& gts,
                    const std::optional<std::set<HoiClass>>& rare = std::nullopt,
                    Interpolation interp = Interpolation::kAllPoint);

struct VcocoOptions {
  int scenario = 2;  // 1 or 2
  // Scenario 1 ignores the predicted object box even when the GT role is
  // present. Off by default: a wrong box on a present role is a miss.
  bool lenient_scenario1 = false;
  double iou_thresh = 0.5;
  Interpolation interp = Interpolation::kAllPoint;
};

// Role AP in percent, averaged over verbs that have at least one GT.
// Throws kInvalidArgument for a scenario other than 1 or 2.
double vcoco_ap_role(const std::vector<Detection>& preds, const std::vector<GroundTruth>& gts,
                     const VcocoOptions& options = {});

}  // namespace rohoi::metrics
