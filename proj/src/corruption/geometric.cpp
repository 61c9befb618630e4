// Geometric and scene distortions: MP, SC, ET, PD, PIX, ZB.
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rohoi/corruption/corrupt.hpp"
#include "rohoi/error.hpp"

namespace rohoi::corruption {

namespace {

constexpr double kPi = std::numbers::pi;

using raster::Point2;

ImageBuffer moire(const ImageBuffer& img, double freq, double contrast,
                  double angle_offset_deg, RngStream& stream) {
  const double a1 = stream.uniform(0.0, kPi);
  const double a2 = a1 + angle_offset_deg * kPi / 180.0;
  const double f2 = freq * stream.uniform(0.9, 1.1);
  const double p1 = stream.uniform(0.0, 2.0 * kPi);
  const double p2 = stream.uniform(0.0, 2.0 * kPi);
  ImageBuffer out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double g1 = std::cos(2.0 * kPi * freq * (x * std::cos(a1) + y * std::sin(a1)) + p1);
      double g2 = std::cos(2.0 * kPi * f2 * (x * std::cos(a2) + y * std::sin(a2)) + p2);
      double d = contrast * g1 * g2;
      for (int c = 0; c < img.channels(); ++c) out.set(x, y, c, img.at(x, y, c) + d);
    }
  return out;
}

double segment_distance(Point2 p, Point2 a, Point2 b) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0)
                      : 0.0;
  return std::hypot(p.x - a.x - t * vx, p.y - a.y - t * vy);
}

// Anti-aliased line coverage, about 1.5 px wide.
void stamp_segment(std::vector<double>& cover, int w, int h, Point2 a, Point2 b) {
  constexpr double kHalf = 0.75;
  int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - 2)));
  int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + 2)));
  int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - 2)));
  int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + 2)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      double d = segment_distance({double(x), double(y)}, a, b);
      double cov = std::clamp(kHalf + 0.5 - d, 0.0, 1.0);
      double& slot = cover[static_cast<std::size_t>(y) * w + x];
      slot = std::max(slot, cov);
    }
}

void grow_crack(std::vector<double>& cover, int w, int h, Point2 p, double heading,
                double length, double step, RngStream& stream, int depth) {
  double walked = 0.0;
  while (walked < length) {
    heading += stream.normal(0.0, 0.35);
    Point2 q{p.x + step * std::cos(heading), p.y + step * std::sin(heading)};
    stamp_segment(cover, w, h, p, q);
    p = q;
    walked += step;
    if (p.x < -step || p.y < -step || p.x > w + step || p.y > h + step) return;
    if (depth < 2 && stream.bernoulli(0.12)) {
      double side = stream.bernoulli(0.5) ? 1.0 : -1.0;
      grow_crack(cover, w, h, p, heading + side * stream.uniform(0.4, 1.2),
                 0.5 * (length - walked), step, stream, depth + 1);
    }
  }
}

ImageBuffer screen_crack(const ImageBuffer& img, int cracks, double length_rel,
                         double alpha, int streaks, double glare, RngStream& stream) {
  const int w = img.width();
  const int h = img.height();
  const double diag = std::hypot(w, h);
  const double step = std::max(1.0, 0.02 * diag);
  std::vector<double> cover(img.pixel_count(), 0.0);
  // Cracks radiate from a shared impact point.
  Point2 impact{stream.uniform(0.0, w - 1.0), stream.uniform(0.0, h - 1.0)};
  for (int i = 0; i < cracks; ++i)
    grow_crack(cover, w, h, impact, stream.uniform(0.0, 2.0 * kPi),
               length_rel * diag * stream.uniform(0.6, 1.0), step, stream, 0);

  std::vector<double> light(img.pixel_count(), 0.0);
  for (int s = 0; s < streaks; ++s) {
    Point2 c{stream.uniform(0.0, w - 1.0), stream.uniform(0.0, h - 1.0)};
    double theta = stream.uniform(0.0, kPi);
    double width = 0.02 * diag * stream.uniform(0.5, 1.5);
    double nx = -std::sin(theta), ny = std::cos(theta);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double d = (x - c.x) * nx + (y - c.y) * ny;
        light[static_cast<std::size_t>(y) * w + x] +=
            glare * std::exp(-0.5 * (d / width) * (d / width));
      }
  }

  ImageBuffer out(w, h, img.channels());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * w + x;
      double a = alpha * cover[i];
      for (int c = 0; c < img.channels(); ++c) {
        // Fracture lines scatter light, so they render near-white.
        double v = img.at(x, y, c) * (1.0 - a) + 0.95 * a;
        out.set(x, y, c, v + light[i]);
      }
    }
  return out;
}

}  // namespace

ImageBuffer pixelate(const ImageBuffer& img, int block) {
  if (block < 1) throw Error(ErrorCode::kInvalidArgument, "pixelate: block must be >= 1");
  ImageBuffer out(img.width(), img.height(), img.channels());
  const int ch = img.channels();
  std::vector<double> acc(ch);
  for (int by = 0; by < img.height(); by += block)
    for (int bx = 0; bx < img.width(); bx += block) {
      const int ex = std::min(bx + block, img.width());
      const int ey = std::min(by + block, img.height());
      const double n = static_cast<double>(ex - bx) * (ey - by);
      // Offsets from the first sample keep constant tiles exact.
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int y = by; y < ey; ++y)
        for (int x = bx; x < ex; ++x)
          for (int c = 0; c < ch; ++c) acc[c] += img.at(x, y, c) - img.at(bx, by, c);
      for (int y = by; y < ey; ++y)
        for (int x = bx; x < ex; ++x)
          for (int c = 0; c < ch; ++c) out.set(x, y, c, img.at(bx, by, c) + acc[c] / n);
    }
  return out;
}

std::array<Point2, 4> perspective_quad(int width, int height, double inset_x_rel,
                                       double inset_y_rel) {
  const double W = width - 1.0;
  const double H = height - 1.0;
  return {Point2{inset_x_rel * W, inset_y_rel * H}, Point2{(1.0 - inset_x_rel) * W, inset_y_rel * H},
          Point2{W, H}, Point2{0.0, H}};
}

ImageBuffer perspective(const ImageBuffer& img, double inset_x_rel, double inset_y_rel) {
  if (img.width() < 2 || img.height() < 2) return img;
  const double W = img.width() - 1.0;
  const double H = img.height() - 1.0;
  std::array<Point2, 4> src = {Point2{0, 0}, Point2{W, 0}, Point2{W, H}, Point2{0, H}};
  auto dst = perspective_quad(img.width(), img.height(), inset_x_rel, inset_y_rel);
  auto inv = raster::Homography::from_points(src, dst).inverse();
  return raster::warp(img, [&](int x, int y) { return inv.apply({double(x), double(y)}); });
}

ImageBuffer zoom_blur(const ImageBuffer& img, double max_zoom, int layers) {
  if (layers < 1) throw Error(ErrorCode::kInvalidArgument, "zoom blur: layers must be >= 1");
  const double cx = 0.5 * (img.width() - 1);
  const double cy = 0.5 * (img.height() - 1);
  auto src = img.data();
  std::vector<double> acc(src.size(), 0.0);
  for (int i = 1; i < layers; ++i) {
    double z = 1.0 + (max_zoom - 1.0) * i / (layers - 1);
    ImageBuffer layer = raster::warp(img, [&](int x, int y) {
      return Point2{cx + (x - cx) / z, cy + (y - cy) / z};
    });
    auto l = layer.data();
    for (std::size_t k = 0; k < src.size(); ++k) acc[k] += l[k] - src[k];
  }
  ImageBuffer out(img.width(), img.height(), img.channels());
  auto dst = out.data();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = raster::clamp01(src[k] + acc[k] / layers);
  return out;
}

ImageBuffer elastic(const ImageBuffer& img, double magnitude_rel, double smoothing_rel,
                    RngStream& stream) {
  const int w = img.width();
  const int h = img.height();
  const double scale = std::min(w, h);
  std::vector<double> dx(img.pixel_count()), dy(img.pixel_count());
  for (auto& v : dx) v = stream.uniform(-1.0, 1.0);
  for (auto& v : dy) v = stream.uniform(-1.0, 1.0);
  const double sigma = std::max(0.5, smoothing_rel * scale);
  raster::blur_plane(dx, w, h, sigma);
  raster::blur_plane(dy, w, h, sigma);
  double peak = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i)
    peak = std::max({peak, std::abs(dx[i]), std::abs(dy[i])});
  if (peak == 0.0) return img;
  const double k = magnitude_rel * scale / peak;
  return raster::warp(img, [&](int x, int y) {
    std::size_t i = static_cast<std::size_t>(y) * w + x;
    return Point2{x + k * dx[i], y + k * dy[i]};
  });
}

ImageBuffer gs_distort(const ImageBuffer& img, Kind kind, int severity, RngStream& stream,
                       const SeverityLadder& ladder) {
  require_severity(severity);
  switch (kind) {
    case Kind::kMoire:
      return moire(img, ladder.value(kind, "frequency_per_px", severity),
                   ladder.value(kind, "contrast", severity),
                   ladder.constant(kind, "angle_offset_deg"), stream);
    case Kind::kScreenCrack:
      return screen_crack(img, ladder.int_value(kind, "cracks", severity),
                          ladder.value(kind, "length_rel", severity),
                          ladder.value(kind, "crack_alpha", severity),
                          ladder.int_value(kind, "glare_streaks", severity),
                          ladder.value(kind, "glare_intensity", severity), stream);
    case Kind::kElastic:
      return elastic(img, ladder.value(kind, "magnitude_rel", severity),
                     ladder.constant(kind, "smoothing_rel"), stream);
    case Kind::kPerspective:
      return perspective(img, ladder.value(kind, "inset_x_rel", severity),
                         ladder.value(kind, "inset_y_rel", severity));
    case Kind::kPixelate:
      return pixelate(img, ladder.int_value(kind, "block_px", severity));
    case Kind::kZoomBlur:
      return zoom_blur(img, ladder.value(kind, "max_zoom", severity),
                       ladder.int_value(kind, "layers", severity));
    default:
      throw Error(ErrorCode::kRegistry,
                  std::string(info(kind).abbrev) + " is not a geometric/scene distortion");
  }
}

}  // namespace rohoi::corruption
