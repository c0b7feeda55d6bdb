#include "slacksim/sca/cpa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slacksim::sca {

bool ScoreVector::any_degenerate() const noexcept {
  return std::any_of(degenerate.begin(), degenerate.end(), [](bool d) { return d; });
}

ScoreVector max_abs_scores(const CorrelationMatrix& corr) {
  ScoreVector out;
  for (std::size_t k = 0; k < kGuesses; ++k) {
    out.degenerate[k] = corr.degenerate[k] != 0;
    double best = 0.0;
    for (double r : corr.row(k)) best = std::max(best, std::abs(r));
    out.scores[k] = best;
  }
  return out;
}

ScoreVector cpa_attack(const power::TraceSet& ts, int target_byte) {
  if (ts.size() < 2) throw std::invalid_argument("CPA needs at least 2 traces");
  CpaAccumulator acc(ts.n_samples());
  acc.add_range(ts, target_byte, 0, ts.size());
  return max_abs_scores(acc.correlations());
}

std::vector<ScoreVector> cpa_scores_at(const power::TraceSet& ts, int target_byte, std::span<const std::size_t> grid) {
  std::vector<ScoreVector> out;
  out.reserve(grid.size());
  CpaAccumulator acc(ts.n_samples());
  std::size_t done = 0;
  for (std::size_t g : grid) {
    if (g < 2 || g < done || g > ts.size()) throw std::invalid_argument("invalid trace-count grid");
    acc.add_range(ts, target_byte, done, g - done);
    done = g;
    out.push_back(max_abs_scores(acc.correlations()));
  }
  return out;
}

}  // namespace slacksim::sca
