#include "coevo/rng.hpp"

namespace coevo {

namespace {
constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
}

Pcg32::Pcg32(std::uint64_t seed, std::uint64_t stream) : seed_(seed) {
  state_ = 0;
  inc_ = (stream << 1u) | 1u;
  (*this)();
  state_ += seed;
  (*this)();
}

Pcg32::result_type Pcg32::operator()() {
  const std::uint64_t old = state_;
  state_ = old * kMultiplier + inc_;
  const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  const auto rot = static_cast<std::uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
}

double Pcg32::uniform() {
  const std::uint32_t a = (*this)() >> 5;
  const std::uint32_t b = (*this)() >> 6;
  return (static_cast<double>(a) * 67108864.0 + static_cast<double>(b)) * (1.0 / 9007199254740992.0);
}

double Pcg32::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint32_t Pcg32::bounded(std::uint32_t bound) {
  const std::uint32_t threshold = (0u - bound) % bound;
  for (;;) {
    const std::uint32_t r = (*this)();
    if (r >= threshold) return r % bound;
  }
}

Pcg32 Pcg32::split(std::uint64_t stream) const { return Pcg32(seed_, stream); }

}  // namespace coevo
