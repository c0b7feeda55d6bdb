#include "slacksim/sca/poi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slacksim/sca/aes_model.hpp"

namespace slacksim::sca {

std::vector<double> profiled_correlation(const power::TraceSet& profiling, int target_byte) {
  const std::size_t n = profiling.size();
  const std::size_t len = profiling.n_samples();
  if (n == 0) throw std::invalid_argument("empty profiling set");
  const auto tb = static_cast<std::size_t>(target_byte);

  std::int64_t sum_h = 0;
  std::int64_t sum_h2 = 0;
  std::vector<std::int64_t> sum_x(len, 0), sum_x2(len, 0), sum_hx(len, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t h = sbox_hypothesis(profiling.plaintext(i)[tb], profiling.key(i)[tb]);
    sum_h += h;
    sum_h2 += h * h;
    const auto t = profiling.trace(i);
    for (std::size_t s = 0; s < len; ++s) {
      const std::int64_t x = t[s];
      sum_x[s] += x;
      sum_x2[s] += x * x;
      sum_hx[s] += h * x;
    }
  }
  using Wide = __int128;
  const Wide nn = static_cast<Wide>(n);
  const double h_den = static_cast<double>(nn * sum_h2 - Wide{sum_h} * sum_h);
  std::vector<double> r(len, 0.0);
  if (h_den == 0.0) return r;
  for (std::size_t s = 0; s < len; ++s) {
    const double x_den = static_cast<double>(nn * sum_x2[s] - Wide{sum_x[s]} * sum_x[s]);
    if (x_den == 0.0) continue;
    r[s] = static_cast<double>(nn * sum_hx[s] - Wide{sum_h} * sum_x[s]) / std::sqrt(h_den * x_den);
  }
  return r;
}

POISet select_poi(const std::vector<double>& correlation, double threshold) {
  POISet poi;
  poi.threshold = threshold;
  double max_abs = 0.0;
  for (std::size_t s = 0; s < correlation.size(); ++s) {
    const double a = std::abs(correlation[s]);
    max_abs = std::max(max_abs, a);
    if (a > threshold) poi.indices.push_back(s);
  }
  if (!poi.indices.empty() && max_abs >= 2.0 * threshold) return poi;

  // Region rule: everything between the first and last sample above half the peak.
  poi.indices.clear();
  poi.region_fallback = true;
  if (max_abs == 0.0) return poi;
  std::size_t first = correlation.size();
  std::size_t last = 0;
  for (std::size_t s = 0; s < correlation.size(); ++s) {
    if (std::abs(correlation[s]) > 0.5 * max_abs) {
      first = std::min(first, s);
      last = s;
    }
  }
  for (std::size_t s = first; s <= last; ++s) poi.indices.push_back(s);
  return poi;
}

POISet profiled_poi(const power::TraceSet& profiling, int target_byte, double threshold) {
  return select_poi(profiled_correlation(profiling, target_byte), threshold);
}

}  // namespace slacksim::sca
