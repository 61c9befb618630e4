#pragma once

#include <vector>

namespace rohoi::raster {

// Square k x k filter, k odd, stored row-major.
class Kernel2D {
 public:
  // Throws kInvalidKernel for even or non-positive sizes, or a weight count
  // that is not size*size.
  Kernel2D(int size, std::vector<double> weights);

  static Kernel2D identity();
  static Kernel2D box(int size);
  // Horizontal or vertical 1-D box embedded in a square kernel.
  static Kernel2D horizontal_box(int size);
  static Kernel2D vertical_box(int size);
  // Radius ceil(3*sigma); normalized.
  static Kernel2D gaussian(double sigma);
  // Aliased disk x^2 + y^2 <= r^2; normalized.
  static Kernel2D disk(int radius);
  // Line of odd length through the center at angle_deg (0 = horizontal),
  // drawn with bilinear splatting of dense samples; normalized.
  static Kernel2D motion_line(int length, double angle_deg);

  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  double weight(int row, int col) const noexcept {
    return weights_[static_cast<std::size_t>(row) * size_ + col];
  }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double sum() const noexcept;

 private:
  int size_;
  std::vector<double> weights_;
};

// Normalized 1-D Gaussian taps of radius ceil(3*sigma).
std::vector<double> gaussian_taps(double sigma);

}  // namespace rohoi::raster
