#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "slacksim/power/trace.hpp"
#include "slacksim/sca/cpa.hpp"

namespace slacksim::sca {

/// Number of guesses scoring strictly above the true key.
int key_rank(const ScoreVector& p, std::uint8_t true_key);

/// Mean key rank over independent attacks. Throws on an empty list.
double guessing_entropy(std::span<const ScoreVector> attacks, std::uint8_t true_key);

struct GECurve {
  std::vector<std::size_t> traces;
  std::vector<double> ge;
  std::size_t n_attacks = 0;
};

/// Roughly logarithmic grid of trace counts in [2, max_traces], always
/// ending at max_traces.
std::vector<std::size_t> log_grid(std::size_t max_traces, unsigned points_per_decade = 20);

/// Scores of one attack after each grid count of the given traces.
using SubsetAttack = std::function<std::vector<ScoreVector>(const power::TraceSet& subset, std::span<const std::size_t> grid)>;

/// Splits `set` into `n_subsets` disjoint consecutive subsets, attacks each
/// one and averages the key ranks per grid point. Subsets run in parallel.
GECurve ge_curve(const power::TraceSet& set, std::size_t n_subsets, std::uint8_t true_key, const SubsetAttack& attack,
                 unsigned points_per_decade = 20);

/// Smallest grid count from which GE stays below 1; nullopt if never.
std::optional<std::size_t> traces_to_ge_below_one(const GECurve& curve);

}  // namespace slacksim::sca
