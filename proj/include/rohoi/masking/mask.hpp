#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "rohoi/config/ladder_file.hpp"
#include "rohoi/raster/image.hpp"
#include "rohoi/raster/ops.hpp"
#include "rohoi/raster/rng.hpp"

namespace rohoi::masking {

using raster::ImageBuffer;
using raster::Point2;
using raster::RngStream;

// Ω = {ω1 (clean), ω2 (low), ω3 (middle), ω4 (high)}.
enum class MaskLevel : std::uint8_t { kClean = 1, kLow = 2, kMiddle = 3, kHigh = 4 };

inline constexpr int kLevelCount = 4;
inline int level_index(MaskLevel l) { return static_cast<int>(l); }
MaskLevel level_from_index(int index);  // 1..4, kInvalidLevel otherwise
std::string_view level_name(MaskLevel l);  // "w1".."w4"
std::optional<MaskLevel> parse_level(std::string_view text);  // "w2", "2", "ω2"

// Axis-aligned box in pixel units; (x, y) is the top-left corner.
struct Rect {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Inclusive pixel bounds of a non-empty mask.
struct PixelBounds {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;
  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
};

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool get(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v = true) noexcept { bits_[index(x, y)] = v ? 1 : 0; }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::size_t count() const noexcept;
  bool none() const noexcept { return count() == 0; }
  std::optional<PixelBounds> bounds() const noexcept;
  bool same_shape(const BinaryMask& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_;
  }
  // True when every set pixel of this mask is also set in other.
  bool subset_of(const BinaryMask& other) const;
  BinaryMask& operator|=(const BinaryMask& other);
  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct InstanceMask {
  BinaryMask mask;
  Rect bbox;
};

// Filled-box fallback when no mask file exists. A pixel belongs to the box
// when its center lies in [x, x+w) x [y, y+h). Throws kInvalidArgument if
// the box is not inside the image.
InstanceMask instance_from_box(int width, int height, const Rect& bbox);

struct CoverRatio {
  double w = 1.0;
  double h = 1.0;
};

class MaskLadder {
 public:
  // Defaults: 0.4/0.5/0.6 for ω2..ω4, dilation radius 2..6 px.
  MaskLadder();
  MaskLadder(std::array<CoverRatio, 3> ratios, int dilation_min, int dilation_max);
  // Reads the [mask] section.
  static MaskLadder from_file(const config::LadderFile& file);

  // Throws kInvalidLevel for ω1, which has no ratios.
  CoverRatio ratio(MaskLevel level) const;
  int dilation_min() const noexcept { return dmin_; }
  int dilation_max() const noexcept { return dmax_; }

 private:
  std::array<CoverRatio, 3> ratios_;
  int dmin_;
  int dmax_;
};

// Square structuring element of side 2r+1. Throws on r < 0.
BinaryMask dilate(const BinaryMask& m, int radius);

// Filled convex hull of the set pixel centers; closed fill. Throws kEmptyMask.
BinaryMask convex_hull(const BinaryMask& m);

// Hull of the pixel-corner outline of m. Vertices are ordered so interior
// points have a positive cross product with every edge.
// Throws kDegenerateGeometry for an empty mask.
std::vector<Point2> outline_polygon(const BinaryMask& m);

// Pixel-center scan conversion with a top-left rule for boundary samples,
// clipped to width x height.
BinaryMask rasterize_polygon(const std::vector<Point2>& poly, int width, int height);

// Scales the hull outline about its area centroid so its tight box becomes
// (r.w * bbox.w, r.h * bbox.h), then re-rasterizes. A unit scale on both axes
// returns the input unchanged.
BinaryMask scale_to_cover(const BinaryMask& hull, const Rect& bbox, CoverRatio r);

// ω1 yields an empty mask. Otherwise dilate by a radius drawn from stream,
// hull, and scale to the level's cover ratios. The radius draw is the first
// use of the stream and does not depend on the level.
BinaryMask build_semantic_mask(const InstanceMask& inst, MaskLevel level,
                               const MaskLadder& ladder, RngStream& stream);

enum class MaskMode { kUnion, kSingle };

// Per-instance streams fork from derive_stream(seed, image_id, 0xF0, 0) by
// instance index. Single mode picks one instance from a separate fork.
BinaryMask build_image_mask(int width, int height, const std::vector<InstanceMask>& instances,
                            MaskLevel level, const MaskLadder& ladder,
                            std::uint64_t global_seed, std::uint64_t image_id,
                            MaskMode mode = MaskMode::kUnion);

inline constexpr std::uint8_t kMaskStreamId = 0xF0;

// Zeroes all channels under the mask. Throws kInvalidArgument on size mismatch.
ImageBuffer apply_mask(const ImageBuffer& img, const BinaryMask& m);

// 8-bit grayscale PNG; >= 128 counts as set. Throws kInvalidArgument when
// the file's size differs from (width, height).
BinaryMask read_mask_png(const std::filesystem::path& path, int width, int height);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& m);

}  // namespace rohoi::masking
