#pragma once

#include <vector>

#include "slacksim/power/trace.hpp"

namespace slacksim::sca {

/// Welch's two-sample t statistic per sample (fixed vs random). A leakage
/// detection diagnostic only; a small |t| does not imply security against
/// hiding countermeasures. Samples with zero variance in both groups give 0.
/// Throws std::invalid_argument for groups of fewer than 2 traces or
/// differing trace lengths.
std::vector<double> welch_ttest(const power::TraceSet& fixed, const power::TraceSet& random);

}  // namespace slacksim::sca
