#include "slacksim/sca/ttest.hpp"

#include <cmath>
#include <stdexcept>

namespace slacksim::sca {

namespace {

struct Moments {
  std::vector<double> mean;
  std::vector<double> var;
};

Moments moments(const power::TraceSet& ts) {
  const std::size_t n = ts.size();
  const std::size_t len = ts.n_samples();
  Moments m{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < len; ++s) m.mean[s] += ts.trace(i)[s];
  }
  for (auto& v : m.mean) v /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < len; ++s) {
      const double d = ts.trace(i)[s] - m.mean[s];
      m.var[s] += d * d;
    }
  }
  for (auto& v : m.var) v /= static_cast<double>(n - 1);
  return m;
}

}  // namespace

std::vector<double> welch_ttest(const power::TraceSet& fixed, const power::TraceSet& random) {
  if (fixed.size() < 2 || random.size() < 2) throw std::invalid_argument("t-test needs at least 2 traces per group");
  if (fixed.n_samples() != random.n_samples()) throw std::invalid_argument("t-test groups differ in trace length");
  const auto a = moments(fixed);
  const auto b = moments(random);
  const double na = static_cast<double>(fixed.size());
  const double nb = static_cast<double>(random.size());
  std::vector<double> t(fixed.n_samples(), 0.0);
  for (std::size_t s = 0; s < t.size(); ++s) {
    const double se2 = a.var[s] / na + b.var[s] / nb;
    if (se2 > 0.0) t[s] = (a.mean[s] - b.mean[s]) / std::sqrt(se2);
  }
  return t;
}

}  // namespace slacksim::sca
