#pragma once

#include <array>
#include <functional>
#include <span>

#include "rohoi/raster/image.hpp"
#include "rohoi/raster/kernel.hpp"

namespace rohoi::raster {

// Half-sample symmetric reflection (d c b a | a b c d | d c b a).
int reflect_index(int i, int n) noexcept;

ImageBuffer convolve_2d(const ImageBuffer& img, const Kernel2D& kernel);

// Row pass with row_taps then column pass with col_taps; both odd-length.
ImageBuffer convolve_separable(const ImageBuffer& img,
                               std::span<const double> row_taps,
                               std::span<const double> col_taps);

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

// In-place separable Gaussian over an unbounded real-valued plane (used for
// displacement fields, which leave the [0,1] value range).
void blur_plane(std::span<double> plane, int width, int height, double sigma);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Maps an output pixel (x, y) to a source coordinate in pixel-center units.
using CoordMap = std::function<Point2(int x, int y)>;

// Bilinear sample; coordinates outside the image clamp to the border.
double sample_bilinear(const ImageBuffer& img, double x, double y, int c);

ImageBuffer warp(const ImageBuffer& img, int out_width, int out_height,
                 const CoordMap& map);
inline ImageBuffer warp(const ImageBuffer& img, const CoordMap& map) {
  return warp(img, img.width(), img.height(), map);
}

enum class Sampling { kBilinear, kNearest };

ImageBuffer resize(const ImageBuffer& img, int new_width, int new_height,
                   Sampling sampling = Sampling::kBilinear);

// 3x3 projective transform, row-major, h[8] normalized to 1.
class Homography {
 public:
  explicit Homography(std::array<double, 9> h) : h_(h) {}

  // Exact four-point solve mapping src[i] -> dst[i]; throws
  // kDegenerateGeometry when the system is singular.
  static Homography from_points(const std::array<Point2, 4>& src,
                                const std::array<Point2, 4>& dst);

  Point2 apply(Point2 p) const noexcept;
  Homography inverse() const;
  const std::array<double, 9>& matrix() const noexcept { return h_; }

 private:
  std::array<double, 9> h_;
};

}  // namespace rohoi::raster
