#pragma once

#include <array>
#include <cstdint>

#include "rohoi/corruption/kinds.hpp"
#include "rohoi/corruption/ladder.hpp"
#include "rohoi/raster/image.hpp"
#include "rohoi/raster/ops.hpp"
#include "rohoi/raster/rng.hpp"

namespace rohoi::corruption {

using raster::ImageBuffer;
using raster::RngStream;

// One benchmark cell for one image.
struct CorruptionSpec {
  Kind kind = Kind::kMotionBlur;
  int severity = 1;
  std::uint64_t seed = 0;
};

// Derives the stream from (spec.seed, image_id, kind, severity) and
// dispatches to the kind's family.
ImageBuffer apply_corruption(const ImageBuffer& img, const CorruptionSpec& spec,
                             std::uint64_t image_id,
                             const SeverityLadder& ladder = SeverityLadder::builtin());

// Family entry points. Each throws kRegistry for kinds outside its family.
// MB, DB and GauB ignore the stream.
ImageBuffer os_blur(const ImageBuffer& img, Kind kind, int severity,
                    RngStream& stream, const SeverityLadder& ladder);
ImageBuffer sct_degrade(const ImageBuffer& img, Kind kind, int severity,
                        RngStream& stream, const SeverityLadder& ladder);
// RE throws kInvalidChannels on grayscale input.
ImageBuffer ei_effect(const ImageBuffer& img, Kind kind, int severity,
                      RngStream& stream, const SeverityLadder& ladder);
ImageBuffer gs_distort(const ImageBuffer& img, Kind kind, int severity,
                       RngStream& stream, const SeverityLadder& ladder);

// Building blocks, exposed for direct use and testing.

ImageBuffer glass_blur(const ImageBuffer& img, double sigma, int max_displacement,
                       int iterations, RngStream& stream);

ImageBuffer gaussian_noise(const ImageBuffer& img, double sigma, RngStream& stream);
ImageBuffer shot_noise(const ImageBuffer& img, double photons, RngStream& stream);
// Each pixel (all channels together) becomes 0 or 1 with probability p.
ImageBuffer salt_and_pepper(const ImageBuffer& img, double p, RngStream& stream);
ImageBuffer speckle_noise(const ImageBuffer& img, double sigma, RngStream& stream);
ImageBuffer jpeg_roundtrip(const ImageBuffer& img, int quality);
ImageBuffer packet_loss(const ImageBuffer& img, int regions, double height_rel,
                        double width_min_rel, RngStream& stream);

enum class ExposureDirection { kOver, kUnder };
ImageBuffer exposure(const ImageBuffer& img, double gain, double gamma,
                     ExposureDirection direction);
ImageBuffer occlusion(const ImageBuffer& img, int count, double area_rel,
                      double aspect_max, RngStream& stream);
ImageBuffer vignette(const ImageBuffer& img, double inner_radius_rel, double strength);

// Block mean over b x b tiles (partial tiles at the border average what
// exists), replicated back to full resolution.
ImageBuffer pixelate(const ImageBuffer& img, int block);
// Destination of the four source corners (TL, TR, BR, BL) in pixel-center
// coordinates for the given insets.
std::array<raster::Point2, 4> perspective_quad(int width, int height,
                                               double inset_x_rel, double inset_y_rel);
ImageBuffer perspective(const ImageBuffer& img, double inset_x_rel, double inset_y_rel);
ImageBuffer zoom_blur(const ImageBuffer& img, double max_zoom, int layers);
ImageBuffer elastic(const ImageBuffer& img, double magnitude_rel, double smoothing_rel,
                    RngStream& stream);

}  // namespace rohoi::corruption
