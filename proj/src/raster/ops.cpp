#include "rohoi/raster/ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rohoi/error.hpp"

namespace rohoi::raster {

namespace {

void require_non_empty(const ImageBuffer& img, const char* what) {
  if (img.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": empty image");
  }
}

void require_odd_taps(std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw Error(ErrorCode::kInvalidKernel, "separable taps must be odd-length");
  }
}

struct Tap {
  int dx;
  int dy;
  double w;
};

}  // namespace

int reflect_index(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

ImageBuffer convolve_2d(const ImageBuffer& img, const Kernel2D& kernel) {
  require_non_empty(img, "convolve_2d");
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  const int r = kernel.radius();

  std::vector<Tap> taps;
  for (int ky = 0; ky < kernel.size(); ++ky)
    for (int kx = 0; kx < kernel.size(); ++kx)
      if (double wt = kernel.weight(ky, kx); wt != 0.0)
        taps.push_back({kx - r, ky - r, wt});

  ImageBuffer out(w, h, ch);
  std::vector<double> acc(ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (const Tap& t : taps) {
        int sx = reflect_index(x + t.dx, w);
        int sy = reflect_index(y + t.dy, h);
        for (int c = 0; c < ch; ++c) acc[c] += t.w * img.at(sx, sy, c);
      }
      for (int c = 0; c < ch; ++c) out.set(x, y, c, acc[c]);
    }
  }
  return out;
}

ImageBuffer convolve_separable(const ImageBuffer& img,
                               std::span<const double> row_taps,
                               std::span<const double> col_taps) {
  require_non_empty(img, "convolve_separable");
  require_odd_taps(row_taps);
  require_odd_taps(col_taps);
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  const int rr = static_cast<int>(row_taps.size() / 2);
  const int rc = static_cast<int>(col_taps.size() / 2);

  // Intermediate kept in double so the two passes round once.
  std::vector<double> tmp(static_cast<std::size_t>(w) * h * ch, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int k = -rr; k <= rr; ++k) {
        double wt = row_taps[k + rr];
        int sx = reflect_index(x + k, w);
        for (int c = 0; c < ch; ++c)
          tmp[img.index(x, y, c)] += wt * img.at(sx, y, c);
      }

  ImageBuffer out(w, h, ch);
  std::vector<double> acc(ch);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int k = -rc; k <= rc; ++k) {
        double wt = col_taps[k + rc];
        int sy = reflect_index(y + k, h);
        for (int c = 0; c < ch; ++c) acc[c] += wt * tmp[img.index(x, sy, c)];
      }
      for (int c = 0; c < ch; ++c) out.set(x, y, c, acc[c]);
    }
  return out;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
  auto taps = gaussian_taps(sigma);
  return convolve_separable(img, taps, taps);
}

void blur_plane(std::span<double> plane, int width, int height, double sigma) {
  if (plane.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidArgument, "blur_plane: size mismatch");
  }
  auto taps = gaussian_taps(sigma);
  const int r = static_cast<int>(taps.size() / 2);
  std::vector<double> tmp(plane.size(), 0.0);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k)
        acc += taps[k + r] * plane[static_cast<std::size_t>(y) * width +
                                   reflect_index(x + k, width)];
      tmp[static_cast<std::size_t>(y) * width + x] = acc;
    }
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k)
        acc += taps[k + r] *
               tmp[static_cast<std::size_t>(reflect_index(y + k, height)) * width + x];
      plane[static_cast<std::size_t>(y) * width + x] = acc;
    }
}

double sample_bilinear(const ImageBuffer& img, double x, double y, int c) {
  const double max_x = img.width() - 1;
  const double max_y = img.height() - 1;
  // NaN coordinates collapse onto the origin rather than propagating.
  x = std::isnan(x) ? 0.0 : std::clamp(x, 0.0, max_x);
  y = std::isnan(y) ? 0.0 : std::clamp(y, 0.0, max_y);
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  int x1 = std::min(x0 + 1, img.width() - 1);
  int y1 = std::min(y0 + 1, img.height() - 1);
  double fx = x - x0;
  double fy = y - y0;
  // a + f*(b - a) keeps constant neighbourhoods and integer positions exact.
  double top = img.at(x0, y0, c) + fx * (img.at(x1, y0, c) - img.at(x0, y0, c));
  double bot = img.at(x0, y1, c) + fx * (img.at(x1, y1, c) - img.at(x0, y1, c));
  return top + fy * (bot - top);
}

ImageBuffer warp(const ImageBuffer& img, int out_width, int out_height,
                 const CoordMap& map) {
  require_non_empty(img, "warp");
  if (out_width < 1 || out_height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "warp: zero output dimension");
  }
  ImageBuffer out(out_width, out_height, img.channels());
  for (int y = 0; y < out_height; ++y)
    for (int x = 0; x < out_width; ++x) {
      Point2 src = map(x, y);
      for (int c = 0; c < img.channels(); ++c)
        out.set(x, y, c, sample_bilinear(img, src.x, src.y, c));
    }
  return out;
}

ImageBuffer resize(const ImageBuffer& img, int new_width, int new_height,
                   Sampling sampling) {
  require_non_empty(img, "resize");
  if (new_width < 1 || new_height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resize: zero target dimension");
  }
  const double sx = static_cast<double>(img.width()) / new_width;
  const double sy = static_cast<double>(img.height()) / new_height;
  if (sampling == Sampling::kBilinear) {
    return warp(img, new_width, new_height, [&](int x, int y) {
      return Point2{(x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5};
    });
  }
  ImageBuffer out(new_width, new_height, img.channels());
  for (int y = 0; y < new_height; ++y) {
    int iy = std::min(static_cast<int>(std::floor((y + 0.5) * sy)),
                      img.height() - 1);
    for (int x = 0; x < new_width; ++x) {
      int ix = std::min(static_cast<int>(std::floor((x + 0.5) * sx)),
                        img.width() - 1);
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(ix, iy, c);
    }
  }
  return out;
}

namespace {

// Gaussian elimination with partial pivoting on an n x (n+1) system.
bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& x) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return true;
}

}  // namespace

Homography Homography::from_points(const std::array<Point2, 4>& src,
                                   const std::array<Point2, 4>& dst) {
  std::vector<std::vector<double>> a(8, std::vector<double>(9, 0.0));
  for (int i = 0; i < 4; ++i) {
    const double x = src[i].x, y = src[i].y, u = dst[i].x, v = dst[i].y;
    a[2 * i] = {x, y, 1, 0, 0, 0, -u * x, -u * y, u};
    a[2 * i + 1] = {0, 0, 0, x, y, 1, -v * x, -v * y, v};
  }
  std::vector<double> h;
  if (!solve_linear(a, h)) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "homography: degenerate point configuration");
  }
  return Homography({h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0});
}

Point2 Homography::apply(Point2 p) const noexcept {
  const auto& m = h_;
  double w = m[6] * p.x + m[7] * p.y + m[8];
  return {(m[0] * p.x + m[1] * p.y + m[2]) / w,
          (m[3] * p.x + m[4] * p.y + m[5]) / w};
}

Homography Homography::inverse() const {
  const auto& m = h_;
  double a = m[0], b = m[1], c = m[2], d = m[3], e = m[4], f = m[5], g = m[6],
         hh = m[7], i = m[8];
  double det = a * (e * i - f * hh) - b * (d * i - f * g) + c * (d * hh - e * g);
  if (std::abs(det) < 1e-15) {
    throw Error(ErrorCode::kDegenerateGeometry, "homography is singular");
  }
  std::array<double, 9> inv = {
      (e * i - f * hh) / det, (c * hh - b * i) / det, (b * f - c * e) / det,
      (f * g - d * i) / det,  (a * i - c * g) / det,  (c * d - a * f) / det,
      (d * hh - e * g) / det, (b * g - a * hh) / det, (a * e - b * d) / det};
  double s = inv[8];
  if (std::abs(s) > 1e-15)
    for (double& v : inv) v /= s;
  return Homography(inv);
}

}  // namespace rohoi::raster
