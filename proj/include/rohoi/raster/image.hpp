#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rohoi::raster {

// Row-major interleaved raster with values in [0,1]. Channels is 1 or 3.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, float fill = 0.0f);
  ImageBuffer(int width, int height, int channels, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }

  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  float at(int x, int y, int c) const noexcept { return data_[index(x, y, c)]; }
  float& at(int x, int y, int c) noexcept { return data_[index(x, y, c)]; }

  // Writes v clamped to [0,1].
  void set(int x, int y, int c, double v) noexcept;

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  bool same_shape(const ImageBuffer& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  void clamp_all() noexcept;

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

inline float clamp01(double v) noexcept {
  // NaN maps to 0 so a bad sample cannot escape the value range.
  if (!(v > 0.0)) return 0.0f;
  if (v >= 1.0) return 1.0f;
  return static_cast<float>(v);
}

// 8-bit conversion at IO boundaries: round-half-up of v*255.
std::uint8_t to_byte(float v) noexcept;
inline float from_byte(std::uint8_t b) noexcept { return b / 255.0f; }

ImageBuffer from_bytes(int width, int height, int channels,
                       std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> to_bytes(const ImageBuffer& img);

// Peak signal-to-noise ratio in dB for peak 1.0; +inf for identical images.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

}  // namespace rohoi::raster
