#pragma once

#include <cstddef>
#include <vector>

#include "slacksim/power/trace.hpp"

namespace slacksim::sca {

inline constexpr double kDefaultPoiThreshold = 0.005;

struct POISet {
  std::vector<std::size_t> indices;  // strictly increasing
  double threshold = kDefaultPoiThreshold;
  /// True when the threshold selection was empty or a flat plateau and the
  /// contiguous region around the peaks was taken instead.
  bool region_fallback = false;
};

/// Per-sample correlation between HW(Sbox[p ^ k]) with each trace's own key
/// and the samples. Zero-variance samples get 0.
std::vector<double> profiled_correlation(const power::TraceSet& profiling, int target_byte);

POISet select_poi(const std::vector<double>& correlation, double threshold);
POISet profiled_poi(const power::TraceSet& profiling, int target_byte, double threshold = kDefaultPoiThreshold);

}  // namespace slacksim::sca
