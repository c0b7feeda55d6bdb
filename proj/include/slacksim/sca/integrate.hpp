#pragma once

#include <cstddef>

#include "slacksim/power/trace.hpp"

namespace slacksim::sca {

/// Sums non-overlapping windows of `window` samples; a final partial window
/// is summed as is. Metadata is preserved.
power::TraceSet integrate_traces(const power::TraceSet& ts, std::size_t window);

}  // namespace slacksim::sca
