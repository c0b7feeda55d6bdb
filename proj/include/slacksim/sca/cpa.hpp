#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "slacksim/power/trace.hpp"
#include "slacksim/sca/kernels.hpp"

namespace slacksim::sca {

/// One score per key-byte guess; higher means more likely.
struct ScoreVector {
  std::array<double, kGuesses> scores{};
  /// Guesses whose hypothesis column was constant; they score 0.
  std::array<bool, kGuesses> degenerate{};

  bool any_degenerate() const noexcept;
};

/// score[k] = max over samples of |r(k, s)|.
ScoreVector max_abs_scores(const CorrelationMatrix& corr);

/// Basic CPA against one key byte. Throws std::invalid_argument for fewer than 2 traces.
ScoreVector cpa_attack(const power::TraceSet& ts, int target_byte);

/// CPA scores after the first grid[j] traces of `ts`, for every j.
/// `grid` must be increasing, start at >= 2 and not exceed ts.size().
std::vector<ScoreVector> cpa_scores_at(const power::TraceSet& ts, int target_byte, std::span<const std::size_t> grid);

}  // namespace slacksim::sca
