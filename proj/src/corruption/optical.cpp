// Optical-system blurs: MB, DB, GauB, GB.
#include <algorithm>

#include "rohoi/corruption/corrupt.hpp"
#include "rohoi/error.hpp"

namespace rohoi::corruption {

namespace {

void swap_pixels(ImageBuffer& img, int x0, int y0, int x1, int y1) {
  for (int c = 0; c < img.channels(); ++c) std::swap(img.at(x0, y0, c), img.at(x1, y1, c));
}

}  // namespace

ImageBuffer glass_blur(const ImageBuffer& img, double sigma, int max_displacement,
                       int iterations, RngStream& stream) {
  ImageBuffer out = raster::gaussian_blur(img, sigma);
  const int w = out.width();
  const int h = out.height();
  for (int it = 0; it < iterations; ++it) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int dx = stream.uniform_int(-max_displacement, max_displacement);
        int dy = stream.uniform_int(-max_displacement, max_displacement);
        int tx = x + dx;
        int ty = y + dy;
        if (tx >= 0 && tx < w && ty >= 0 && ty < h) swap_pixels(out, x, y, tx, ty);
      }
    }
  }
  return raster::gaussian_blur(out, sigma);
}

ImageBuffer os_blur(const ImageBuffer& img, Kind kind, int severity, RngStream& stream,
                    const SeverityLadder& ladder) {
  require_severity(severity);
  switch (kind) {
    case Kind::kMotionBlur:
      return raster::convolve_2d(
          img, raster::Kernel2D::motion_line(
                   ladder.int_value(kind, "kernel_length_px", severity),
                   ladder.constant(kind, "angle_deg")));
    case Kind::kDefocusBlur:
      return raster::convolve_2d(
          img, raster::Kernel2D::disk(ladder.int_value(kind, "radius_px", severity)));
    case Kind::kGaussianBlur:
      return raster::gaussian_blur(img, ladder.value(kind, "sigma_px", severity));
    case Kind::kGlassBlur:
      return glass_blur(img, ladder.value(kind, "sigma_px", severity),
                        ladder.int_value(kind, "max_displacement_px", severity),
                        ladder.int_value(kind, "iterations", severity), stream);
    default:
      throw Error(ErrorCode::kRegistry,
                  std::string(info(kind).abbrev) + " is not an optical-system blur");
  }
}

}  // namespace rohoi::corruption
