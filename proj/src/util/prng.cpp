#include "slacksim/util/prng.hpp"

#include <limits>

namespace slacksim {

namespace {
constexpr std::uint64_t kZeroSeedReplacement = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

Prng::Prng(std::uint64_t seed) noexcept : state_(seed == 0 ? kZeroSeedReplacement : seed) {}

std::uint64_t Prng::next() noexcept {
  std::uint64_t s = state_;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t lsb = s & 1U;
    s >>= 1;
    s ^= (0 - lsb) & kTaps;
  }
  state_ = s;
  return s;
}

std::uint64_t Prng::uniform(std::uint64_t bound) noexcept {
  if (bound == 0) return 0;
  if (bound == std::numeric_limits<std::uint64_t>::max()) return next();
  const std::uint64_t range = bound + 1;
  // Largest multiple of range that fits; draws at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % range;
}

double Prng::unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

bool Prng::bernoulli(double p) noexcept {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return unit() < p;
}

std::uint64_t Prng::derive(std::uint64_t master, std::uint64_t index) noexcept {
  const std::uint64_t z = mix64(master + index * 0x9E3779B97F4A7C15ULL);
  return z == 0 ? kZeroSeedReplacement : z;
}

}  // namespace slacksim
