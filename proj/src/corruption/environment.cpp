// Environmental and illumination effects: EXP, RE, OCC, VE.
#include <algorithm>
#include <cmath>
#include <numbers>

#include "rohoi/corruption/corrupt.hpp"
#include "rohoi/error.hpp"

namespace rohoi::corruption {

namespace {

constexpr double kPi = std::numbers::pi;

double smoothstep(double e0, double e1, double x) {
  if (e1 <= e0) return x < e0 ? 0.0 : 1.0;
  double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

ImageBuffer rainbow(const ImageBuffer& img, double intensity, double band_width_rel,
                    double shift_px, double hue_cycles, RngStream& stream) {
  if (img.channels() != 3)
    throw Error(ErrorCode::kInvalidChannels, "rainbow effect requires 3 channels");
  const int w = img.width();
  const int h = img.height();
  const double diag = std::hypot(w, h);
  const double theta = stream.uniform(0.0, kPi);
  const double nx = std::cos(theta);
  const double ny = std::sin(theta);
  const double cx = stream.uniform(0.0, w - 1.0);
  const double cy = stream.uniform(0.0, h - 1.0);
  const double half_width = 0.5 * band_width_rel * diag;
  const double hue_phase = stream.uniform();
  const double shift_angle = stream.uniform(0.0, 2.0 * kPi);

  ImageBuffer out(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double across = (x - cx) * nx + (y - cy) * ny;
      double along = -(x - cx) * ny + (y - cy) * nx;
      double env = intensity * std::exp(-0.5 * (across / half_width) * (across / half_width));
      double hue = hue_phase + hue_cycles * along / diag;
      for (int c = 0; c < 3; ++c) {
        // Red and blue planes move in opposite directions, green stays put.
        double s = (c - 1) * shift_px;
        double v = raster::sample_bilinear(img, x + s * std::cos(shift_angle),
                                           y + s * std::sin(shift_angle), c);
        double tint = 0.5 + 0.5 * std::cos(2.0 * kPi * (hue + c / 3.0));
        out.set(x, y, c, v * (1.0 - env) + tint * env);
      }
    }
  return out;
}

}  // namespace

ImageBuffer exposure(const ImageBuffer& img, double gain, double gamma,
                     ExposureDirection direction) {
  if (!(gain > 0.0) || !(gamma > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "exposure: gain and gamma must be positive");
  ImageBuffer out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    double x = src[i];
    double v = direction == ExposureDirection::kOver
                   ? std::pow(std::min(1.0, gain * x), 1.0 / gamma)
                   : std::pow(x / gain, gamma);
    dst[i] = raster::clamp01(v);
  }
  return out;
}

ImageBuffer occlusion(const ImageBuffer& img, int count, double area_rel,
                      double aspect_max, RngStream& stream) {
  ImageBuffer out = img;
  const int w = img.width();
  const int h = img.height();
  const double area = area_rel * w * h;
  const double log_aspect = std::log(std::max(1.0, aspect_max));
  for (int i = 0; i < count; ++i) {
    double aspect = std::exp(stream.uniform(-log_aspect, log_aspect));
    int rw = std::clamp(static_cast<int>(std::ceil(std::sqrt(area * aspect))), 1, w);
    int rh = std::clamp(static_cast<int>(std::ceil(area / rw)), 1, h);
    int x0 = stream.uniform_int(0, w - rw);
    int y0 = stream.uniform_int(0, h - rh);
    for (int y = y0; y < y0 + rh; ++y)
      for (int x = x0; x < x0 + rw; ++x)
        for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = 0.0f;
  }
  return out;
}

ImageBuffer vignette(const ImageBuffer& img, double inner_radius_rel, double strength) {
  ImageBuffer out(img.width(), img.height(), img.channels());
  const double cx = 0.5 * (img.width() - 1);
  const double cy = 0.5 * (img.height() - 1);
  const double rmax = std::max(std::hypot(cx, cy), 1e-9);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double r = std::hypot(x - cx, y - cy) / rmax;
      double g = 1.0 - strength * smoothstep(inner_radius_rel, 1.0, r);
      for (int c = 0; c < img.channels(); ++c) out.set(x, y, c, img.at(x, y, c) * g);
    }
  return out;
}

ImageBuffer ei_effect(const ImageBuffer& img, Kind kind, int severity, RngStream& stream,
                      const SeverityLadder& ladder) {
  require_severity(severity);
  switch (kind) {
    case Kind::kExposure: {
      auto dir = stream.bernoulli(0.5) ? ExposureDirection::kOver : ExposureDirection::kUnder;
      return exposure(img, ladder.value(kind, "gain", severity),
                      ladder.value(kind, "gamma", severity), dir);
    }
    case Kind::kRainbow:
      return rainbow(img, ladder.value(kind, "intensity", severity),
                     ladder.value(kind, "band_width_rel", severity),
                     ladder.value(kind, "channel_shift_px", severity),
                     ladder.constant(kind, "hue_cycles"), stream);
    case Kind::kOcclusion:
      return occlusion(img, ladder.int_value(kind, "count", severity),
                       ladder.value(kind, "area_rel", severity),
                       ladder.constant(kind, "aspect_max"), stream);
    case Kind::kVignette:
      return vignette(img, ladder.value(kind, "inner_radius_rel", severity),
                      ladder.value(kind, "strength", severity));
    default:
      throw Error(ErrorCode::kRegistry,
                  std::string(info(kind).abbrev) + " is not an environmental effect");
  }
}

}  // namespace rohoi::corruption
