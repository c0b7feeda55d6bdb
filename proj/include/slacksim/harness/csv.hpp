#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slacksim/sca/cpa.hpp"
#include "slacksim/sca/metrics.hpp"

namespace slacksim::harness {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_double(double v);

/// Trace count, or ">max" when the key was not recovered within `max`.
std::string format_count(const std::optional<std::size_t>& n, std::size_t max);

std::string ge_csv(const sca::GECurve& curve);                         // traces,ge
std::string scores_csv(const sca::ScoreVector& scores);                // guess,score
std::string correlation_csv(const std::vector<double>& correlation);   // sample_index,correlation

/// Writes `text` to `path`, creating parent directories. Throws on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace slacksim::harness
