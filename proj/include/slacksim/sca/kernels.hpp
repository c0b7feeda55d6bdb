#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slacksim/power/trace.hpp"

namespace slacksim::sca {

inline constexpr std::size_t kGuesses = 256;

/// 256 x n_samples Pearson correlations, row-major by key guess.
struct CorrelationMatrix {
  std::size_t n_samples = 0;
  std::vector<double> r;
  /// Guesses whose hypothesis column has zero variance (their row is all zero).
  std::vector<std::uint8_t> degenerate;

  double at(std::size_t guess, std::size_t sample) const { return r[guess * n_samples + sample]; }
  std::span<const double> row(std::size_t guess) const { return {r.data() + guess * n_samples, n_samples}; }
};

namespace reference {

/// Two-pass textbook Pearson correlation for every (guess, sample) pair.
/// Serial and slow; the oracle for CpaAccumulator.
CorrelationMatrix correlate(const power::TraceSet& ts, int target_byte);

}  // namespace reference

/// Exact integer running sums for CPA over a growing set of traces. Integer
/// accumulation makes the result independent of summation order.
class CpaAccumulator {
 public:
  explicit CpaAccumulator(std::size_t n_samples);

  void add(std::span<const std::uint32_t> trace, std::uint8_t plaintext_byte);
  /// Adds traces [first, first + count) of `ts`; parallel over key guesses.
  void add_range(const power::TraceSet& ts, int target_byte, std::size_t first, std::size_t count);

  std::size_t count() const noexcept { return n_; }
  std::size_t n_samples() const noexcept { return n_samples_; }

  /// Parallel over key guesses.
  CorrelationMatrix correlations() const;

 private:
  std::size_t n_samples_;
  std::int64_t n_ = 0;
  std::vector<std::int64_t> sum_x_;
  std::vector<std::int64_t> sum_x2_;
  std::vector<std::int64_t> sum_h_;
  std::vector<std::int64_t> sum_h2_;
  std::vector<std::int64_t> sum_hx_;
};

}  // namespace slacksim::sca
