#pragma once

#include <cstdint>

namespace rohoi::raster {

struct StreamProvenance {
  std::uint64_t global_seed = 0;
  std::uint64_t image_id = 0;
  std::uint8_t corruption_id = 0;
  std::uint8_t severity = 0;

  friend bool operator==(const StreamProvenance&,
                         const StreamProvenance&) = default;
};

// Counter-based generator: draw n is mix(key + n * gamma), so a stream's
// output depends only on its key and how many values it has produced.
// All distributions are implemented here so sequences do not depend on the
// standard library's distribution algorithms.
class RngStream {
 public:
  RngStream(std::uint64_t key, StreamProvenance provenance)
      : key_(key), provenance_(provenance) {}

  std::uint64_t next_u64() noexcept;
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  // Inclusive range, unbiased.
  int uniform_int(int lo, int hi) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }
  // Standard normal via Box-Muller.
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }
  // Knuth product method below lambda 10, PTRS transformed rejection above.
  std::int64_t poisson(double lambda) noexcept;

  // Independent child stream keyed by (this stream's key, tag).
  RngStream fork(std::uint64_t tag) const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }
  const StreamProvenance& provenance() const noexcept { return provenance_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  StreamProvenance provenance_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

RngStream derive_stream(std::uint64_t global_seed, std::uint64_t image_id,
                        std::uint8_t corruption_id, std::uint8_t severity) noexcept;

}  // namespace rohoi::raster
