#include "rohoi/raster/rng.hpp"

#include <cmath>
#include <numbers>

namespace rohoi::raster {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t absorb(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(h ^ mix64(v + kGamma));
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t RngStream::next_u64() noexcept {
  return mix64(key_ + kGamma * (counter_++));
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int RngStream::uniform_int(int lo, int hi) noexcept {
  if (hi <= lo) return lo;
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - lo + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return static_cast<int>(lo + static_cast<std::int64_t>(v % range));
}

double RngStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  double mag = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(angle);
  has_spare_ = true;
  return mag * std::cos(angle);
}

std::int64_t RngStream::poisson(double lambda) noexcept {
  if (!(lambda > 0.0)) return 0;
  if (lambda < 10.0) {
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    double u = uniform() - 0.5;
    double v = uniform();
    double us = 0.5 - std::abs(u);
    auto k = static_cast<std::int64_t>(
        std::floor((2.0 * a / us + b) * u + lambda + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + k * loglam - std::lgamma(static_cast<double>(k) + 1.0)) {
      return k;
    }
  }
}

RngStream RngStream::fork(std::uint64_t tag) const noexcept {
  return RngStream(absorb(absorb(key_, 0xF0F0ull), tag), provenance_);
}

RngStream derive_stream(std::uint64_t global_seed, std::uint64_t image_id,
                        std::uint8_t corruption_id,
                        std::uint8_t severity) noexcept {
  std::uint64_t h = 0x524F484F49ull;  // domain tag
  h = absorb(h, global_seed);
  h = absorb(h, image_id);
  h = absorb(h, corruption_id);
  h = absorb(h, severity);
  return RngStream(h, {global_seed, image_id, corruption_id, severity});
}

}  // namespace rohoi::raster
