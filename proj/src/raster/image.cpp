#include "rohoi/raster/image.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rohoi/error.hpp"

namespace rohoi::raster {

namespace {

void check_shape(int width, int height, int channels) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative image dimension");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kInvalidChannels,
                "unsupported channel count " + std::to_string(channels));
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  check_shape(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels,
               clamp01(fill));
}

ImageBuffer::ImageBuffer(int width, int height, int channels,
                         std::vector<float> data)
    : width_(width), height_(height), channels_(channels),
      data_(std::move(data)) {
  check_shape(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::kInvalidArgument,
                "image data length does not match width*height*channels");
  }
  clamp_all();
}

void ImageBuffer::set(int x, int y, int c, double v) noexcept {
  data_[index(x, y, c)] = clamp01(v);
}

void ImageBuffer::clamp_all() noexcept {
  for (float& v : data_) v = clamp01(v);
}

std::uint8_t to_byte(float v) noexcept {
  double scaled = std::floor(static_cast<double>(clamp01(v)) * 255.0 + 0.5);
  return static_cast<std::uint8_t>(scaled);
}

ImageBuffer from_bytes(int width, int height, int channels,
                       std::span<const std::uint8_t> bytes) {
  std::vector<float> data(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) data[i] = from_byte(bytes[i]);
  return ImageBuffer(width, height, channels, std::move(data));
}

std::vector<std::uint8_t> to_bytes(const ImageBuffer& img) {
  std::vector<std::uint8_t> out(img.data().size());
  auto src = img.data();
  for (std::size_t i = 0; i < src.size(); ++i) out[i] = to_byte(src[i]);
  return out;
}

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b) || a.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "psnr needs equal-shape images");
  }
  double sse = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    double d = static_cast<double>(da[i]) - db[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  double mse = sse / static_cast<double>(da.size());
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace rohoi::raster
