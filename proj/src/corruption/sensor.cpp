// Sensor, compression and transmission artifacts: GauN, ShN, S&P, JPEG, SN, PL.
#include <algorithm>
#include <cmath>

#include "rohoi/corruption/corrupt.hpp"
#include "rohoi/error.hpp"
#include "rohoi/raster/image_io.hpp"

namespace rohoi::corruption {

ImageBuffer gaussian_noise(const ImageBuffer& img, double sigma, RngStream& stream) {
  ImageBuffer out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = raster::clamp01(src[i] + sigma * stream.normal());
  return out;
}

ImageBuffer shot_noise(const ImageBuffer& img, double photons, RngStream& stream) {
  if (!(photons > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "shot noise: photons must be positive");
  ImageBuffer out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = raster::clamp01(static_cast<double>(stream.poisson(src[i] * photons)) / photons);
  return out;
}

ImageBuffer salt_and_pepper(const ImageBuffer& img, double p, RngStream& stream) {
  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      if (!stream.bernoulli(p)) continue;
      float v = stream.bernoulli(0.5) ? 1.0f : 0.0f;
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = v;
    }
  return out;
}

ImageBuffer speckle_noise(const ImageBuffer& img, double sigma, RngStream& stream) {
  ImageBuffer out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = raster::clamp01(src[i] * (1.0 + sigma * stream.normal()));
  return out;
}

ImageBuffer jpeg_roundtrip(const ImageBuffer& img, int quality) {
  return raster::decode_jpeg(raster::encode_jpeg(img, quality));
}

ImageBuffer packet_loss(const ImageBuffer& img, int regions, double height_rel,
                        double width_min_rel, RngStream& stream) {
  ImageBuffer out = img;
  const int w = img.width();
  const int h = img.height();
  const int rh = std::clamp(static_cast<int>(std::ceil(height_rel * h)), 1, h);
  const int min_w = std::clamp(static_cast<int>(std::ceil(width_min_rel * w)), 1, w);
  for (int r = 0; r < regions; ++r) {
    int rw = stream.uniform_int(min_w, w);
    int x0 = stream.uniform_int(0, w - rw);
    int y0 = stream.uniform_int(0, h - rh);
    bool duplicate = stream.bernoulli(0.5);
    // Duplicates read from the clean frame so overlapping regions do not chain.
    int sx = stream.uniform_int(0, w - rw);
    int sy = stream.uniform_int(0, h - rh);
    for (int y = 0; y < rh; ++y)
      for (int x = 0; x < rw; ++x)
        for (int c = 0; c < img.channels(); ++c)
          out.at(x0 + x, y0 + y, c) = duplicate ? img.at(sx + x, sy + y, c) : 0.0f;
  }
  return out;
}

ImageBuffer sct_degrade(const ImageBuffer& img, Kind kind, int severity,
                        RngStream& stream, const SeverityLadder& ladder) {
  require_severity(severity);
  switch (kind) {
    case Kind::kGaussianNoise:
      return gaussian_noise(img, ladder.value(kind, "sigma", severity), stream);
    case Kind::kShotNoise:
      return shot_noise(img, ladder.value(kind, "photons", severity), stream);
    case Kind::kSaltPepper:
      return salt_and_pepper(img, ladder.value(kind, "probability", severity), stream);
    case Kind::kJpeg:
      return jpeg_roundtrip(img, ladder.int_value(kind, "quality", severity));
    case Kind::kSpeckleNoise:
      return speckle_noise(img, ladder.value(kind, "sigma", severity), stream);
    case Kind::kPacketLoss:
      return packet_loss(img, ladder.int_value(kind, "regions", severity),
                         ladder.value(kind, "height_rel", severity),
                         ladder.constant(kind, "width_min_rel"), stream);
    default:
      throw Error(ErrorCode::kRegistry,
                  std::string(info(kind).abbrev) + " is not a sensor/compression artifact");
  }
}

}  // namespace rohoi::corruption
