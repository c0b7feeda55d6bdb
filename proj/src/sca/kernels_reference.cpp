#include <cmath>
#include <stdexcept>

#include "slacksim/sca/aes_model.hpp"
#include "slacksim/sca/kernels.hpp"

namespace slacksim::sca::reference {

CorrelationMatrix correlate(const power::TraceSet& ts, int target_byte) {
  const std::size_t n = ts.size();
  const std::size_t len = ts.n_samples();
  if (n < 2) throw std::invalid_argument("correlation needs at least 2 traces");

  CorrelationMatrix out;
  out.n_samples = len;
  out.r.assign(kGuesses * len, 0.0);
  out.degenerate.assign(kGuesses, 0);

  std::vector<double> x_mean(len, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < len; ++s) x_mean[s] += ts.trace(i)[s];
  }
  for (auto& m : x_mean) m /= static_cast<double>(n);

  std::vector<double> h(n);
  for (std::size_t k = 0; k < kGuesses; ++k) {
    double h_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = sbox_hypothesis(ts.plaintext(i)[static_cast<std::size_t>(target_byte)], static_cast<std::uint8_t>(k));
      h_mean += h[i];
    }
    h_mean /= static_cast<double>(n);
    double h_var = 0.0;
    for (std::size_t i = 0; i < n; ++i) h_var += (h[i] - h_mean) * (h[i] - h_mean);
    if (h_var == 0.0) {
      out.degenerate[k] = 1;
      continue;
    }
    for (std::size_t s = 0; s < len; ++s) {
      double cov = 0.0;
      double x_var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = ts.trace(i)[s] - x_mean[s];
        cov += (h[i] - h_mean) * dx;
        x_var += dx * dx;
      }
      out.r[k * len + s] = x_var == 0.0 ? 0.0 : cov / std::sqrt(h_var * x_var);
    }
  }
  return out;
}

}  // namespace slacksim::sca::reference
