#include "rohoi/raster/kernel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "rohoi/error.hpp"

namespace rohoi::raster {

namespace {

void normalize(std::vector<double>& w) {
  double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= s;
}

}  // namespace

Kernel2D::Kernel2D(int size, std::vector<double> weights)
    : size_(size), weights_(std::move(weights)) {
  if (size < 1 || size % 2 == 0) {
    throw Error(ErrorCode::kInvalidKernel,
                "kernel size must be odd and >= 1, got " + std::to_string(size));
  }
  if (weights_.size() != static_cast<std::size_t>(size) * size) {
    throw Error(ErrorCode::kInvalidKernel, "kernel weight count != size*size");
  }
}

Kernel2D Kernel2D::identity() { return Kernel2D(1, {1.0}); }

Kernel2D Kernel2D::box(int size) {
  std::size_t n = static_cast<std::size_t>(size > 0 ? size : 0);
  return Kernel2D(size, std::vector<double>(n * n, 1.0 / double(n * n)));
}

Kernel2D Kernel2D::horizontal_box(int size) {
  std::size_t n = static_cast<std::size_t>(size > 0 ? size : 0);
  std::vector<double> w(n * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) w[(n / 2) * n + c] = 1.0 / double(n);
  return Kernel2D(size, std::move(w));
}

Kernel2D Kernel2D::vertical_box(int size) {
  std::size_t n = static_cast<std::size_t>(size > 0 ? size : 0);
  std::vector<double> w(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) w[r * n + n / 2] = 1.0 / double(n);
  return Kernel2D(size, std::move(w));
}

Kernel2D Kernel2D::gaussian(double sigma) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kInvalidKernel, "gaussian sigma must be > 0");
  }
  auto taps = gaussian_taps(sigma);
  int n = static_cast<int>(taps.size());
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) w[r * n + c] = taps[r] * taps[c];
  normalize(w);
  return Kernel2D(n, std::move(w));
}

Kernel2D Kernel2D::disk(int radius) {
  if (radius < 0) throw Error(ErrorCode::kInvalidKernel, "negative radius");
  int n = 2 * radius + 1;
  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = -radius; r <= radius; ++r)
    for (int c = -radius; c <= radius; ++c)
      if (r * r + c * c <= radius * radius)
        w[(r + radius) * n + (c + radius)] = 1.0;
  normalize(w);
  return Kernel2D(n, std::move(w));
}

Kernel2D Kernel2D::motion_line(int length, double angle_deg) {
  if (length < 1 || length % 2 == 0) {
    throw Error(ErrorCode::kInvalidKernel,
                "motion length must be odd, got " + std::to_string(length));
  }
  int n = length;
  int half = n / 2;
  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  double theta = angle_deg * std::numbers::pi / 180.0;
  double dx = std::cos(theta);
  double dy = -std::sin(theta);
  // Snap axis-aligned directions so the common horizontal case is exact.
  if (std::abs(dx) < 1e-12) dx = 0.0;
  if (std::abs(dy) < 1e-12) dy = 0.0;
  const int samples = 8 * n + 1;
  for (int i = 0; i < samples; ++i) {
    double t = -half + (2.0 * half) * i / (samples - 1);
    double px = half + t * dx;
    double py = half + t * dy;
    int x0 = static_cast<int>(std::floor(px));
    int y0 = static_cast<int>(std::floor(py));
    double fx = px - x0;
    double fy = py - y0;
    auto splat = [&](int x, int y, double v) {
      if (x >= 0 && x < n && y >= 0 && y < n && v > 0.0) w[y * n + x] += v;
    };
    splat(x0, y0, (1 - fx) * (1 - fy));
    splat(x0 + 1, y0, fx * (1 - fy));
    splat(x0, y0 + 1, (1 - fx) * fy);
    splat(x0 + 1, y0 + 1, fx * fy);
  }
  normalize(w);
  return Kernel2D(n, std::move(w));
}

double Kernel2D::sum() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kInvalidKernel, "gaussian sigma must be > 0");
  }
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    taps[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  normalize(taps);
  return taps;
}

}  // namespace rohoi::raster
