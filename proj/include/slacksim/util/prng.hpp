#pragma once

#include <cstdint>

namespace slacksim {

/// 64-bit Galois linear feedback shift register.
///
/// Feedback polynomial x^64 + x^63 + x^61 + x^60 + 1 (maximal length), tap
/// mask 0xD800000000000000. Each call to next() clocks the register 64 times
/// and returns the resulting state, so consecutive outputs share no bits.
/// The state is never zero; a zero seed is replaced by a fixed constant.
class Prng {
 public:
  static constexpr std::uint64_t kTaps = 0xD800000000000000ULL;

  explicit Prng(std::uint64_t seed = 1) noexcept;

  std::uint64_t next() noexcept;

  /// Uniform integer in [0, bound] (inclusive). Rejection sampling, no modulo bias.
  std::uint64_t uniform(std::uint64_t bound) noexcept;

  /// Uniform real in [0, 1) from the top 53 bits.
  double unit() noexcept;

  /// True with probability p (p outside [0,1] is clamped).
  bool bernoulli(double p) noexcept;

  std::uint64_t state() const noexcept { return state_; }

  /// Seed for independent stream `index` under `master`. Distinct indices map to
  /// distinct seeds (bijective mix of master + index * odd constant).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) noexcept;

  friend bool operator==(const Prng&, const Prng&) = default;

 private:
  std::uint64_t state_;
};

}  // namespace slacksim
