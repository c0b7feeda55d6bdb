#pragma once

// Synthetic trace sets with a single known leak, plus a plain two-pass
// Pearson correlation used as the brute-force CPA oracle.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "slacksim/power/trace.hpp"
#include "support/aes_oracle.hpp"

namespace testgen {

inline int hw(unsigned v) { return std::popcount(v); }

/// Sample `leak_at` carries HW(Sbox[p0 ^ k0]) on top of Gaussian noise around
/// 40; every other sample is noise only. Profiling sets draw k0 per trace.
inline slacksim::power::TraceSet synthetic(std::size_t n, std::size_t n_samples, std::size_t leak_at, std::uint8_t key,
                                           double sigma, unsigned seed, bool random_keys = false) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::uniform_int_distribution<int> byte(0, 255);
  slacksim::power::TraceSet ts(random_keys ? slacksim::power::SetKind::Profiling : slacksim::power::SetKind::Attack, n,
                               n_samples);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& b : ts.plaintext(i)) b = static_cast<std::uint8_t>(byte(gen));
    ts.key(i)[0] = random_keys ? static_cast<std::uint8_t>(byte(gen)) : key;
    const int leak = hw(oracle::sbox()[ts.plaintext(i)[0] ^ ts.key(i)[0]]);
    for (std::size_t s = 0; s < n_samples; ++s) {
      const double v = 40.0 + (sigma > 0 ? noise(gen) : 0.0) + (s == leak_at ? leak : 0);
      ts.trace(i)[s] = static_cast<std::uint32_t>(std::lround(std::max(0.0, v)));
    }
  }
  return ts;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return (sxx == 0 || syy == 0) ? 0.0 : sxy / std::sqrt(sxx * syy);
}

/// Brute-force correlation of HW(Sbox[p0 ^ guess]) with sample `s`.
inline double brute_force_cpa(const slacksim::power::TraceSet& ts, unsigned guess, std::size_t s) {
  std::vector<double> h(ts.size()), x(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    h[i] = hw(oracle::sbox()[ts.plaintext(i)[0] ^ guess]);
    x[i] = ts.trace(i)[s];
  }
  return pearson(h, x);
}

}  // namespace testgen
