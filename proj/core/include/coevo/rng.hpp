#pragma once

#include <cstdint>

namespace coevo {

// PCG32 (XSH-RR output, 64-bit LCG state). Every draw the library makes goes
// through this type so runs reproduce bit-for-bit across compilers and
// standard libraries; <random> distributions are not portable.
//
// Streams: two generators with the same seed but different stream ids are
// statistically independent sequences. Sweep row r draws from seed base + r;
// within one run, split() separates the graph draws from the opinion draws.
class Pcg32 {
 public:
  using result_type = std::uint32_t;

  explicit Pcg32(std::uint64_t seed = 0x853c49e6748fea9bULL, std::uint64_t stream = 0xda3e39cb94b95bdbULL);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Unbiased integer in [0, bound); bound must be > 0.
  std::uint32_t bounded(std::uint32_t bound);

  /// Generator for a derived stream: same seed, stream id `stream`.
  Pcg32 split(std::uint64_t stream) const;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
  std::uint64_t seed_ = 0;
};

}  // namespace coevo
