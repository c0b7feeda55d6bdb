#include <cmath>
#include <stdexcept>

#include "slacksim/sca/aes_model.hpp"
#include "slacksim/sca/kernels.hpp"

namespace slacksim::sca {

CpaAccumulator::CpaAccumulator(std::size_t n_samples)
    : n_samples_(n_samples),
      sum_x_(n_samples, 0),
      sum_x2_(n_samples, 0),
      sum_h_(kGuesses, 0),
      sum_h2_(kGuesses, 0),
      sum_hx_(kGuesses * n_samples, 0) {}

void CpaAccumulator::add(std::span<const std::uint32_t> trace, std::uint8_t plaintext_byte) {
  if (trace.size() != n_samples_) throw std::invalid_argument("trace length does not match accumulator");
  ++n_;
  for (std::size_t s = 0; s < n_samples_; ++s) {
    const std::int64_t x = trace[s];
    sum_x_[s] += x;
    sum_x2_[s] += x * x;
  }
  const auto& table = hypothesis_table();
  for (std::size_t k = 0; k < kGuesses; ++k) {
    const std::int64_t h = table[k][plaintext_byte];
    sum_h_[k] += h;
    sum_h2_[k] += h * h;
    if (h == 0) continue;
    std::int64_t* row = sum_hx_.data() + k * n_samples_;
    for (std::size_t s = 0; s < n_samples_; ++s) row[s] += h * static_cast<std::int64_t>(trace[s]);
  }
}

void CpaAccumulator::add_range(const power::TraceSet& ts, int target_byte, std::size_t first, std::size_t count) {
  if (ts.n_samples() != n_samples_) throw std::invalid_argument("trace length does not match accumulator");
  if (first + count > ts.size()) throw std::out_of_range("trace range out of bounds");
  const auto tb = static_cast<std::size_t>(target_byte);
  for (std::size_t i = first; i < first + count; ++i) {
    const auto t = ts.trace(i);
    for (std::size_t s = 0; s < n_samples_; ++s) {
      const std::int64_t x = t[s];
      sum_x_[s] += x;
      sum_x2_[s] += x * x;
    }
  }
  n_ += static_cast<std::int64_t>(count);

  const auto& table = hypothesis_table();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(kGuesses); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    std::int64_t* row = sum_hx_.data() + k * n_samples_;
    for (std::size_t i = first; i < first + count; ++i) {
      const std::int64_t h = table[k][ts.plaintext(i)[tb]];
      sum_h_[k] += h;
      sum_h2_[k] += h * h;
      if (h == 0) continue;
      const auto t = ts.trace(i);
      for (std::size_t s = 0; s < n_samples_; ++s) row[s] += h * static_cast<std::int64_t>(t[s]);
    }
  }
}

CorrelationMatrix CpaAccumulator::correlations() const {
  if (n_ < 2) throw std::invalid_argument("correlation needs at least 2 traces");
  CorrelationMatrix out;
  out.n_samples = n_samples_;
  out.r.assign(kGuesses * n_samples_, 0.0);
  out.degenerate.assign(kGuesses, 0);

  using Wide = __int128;
  std::vector<double> x_den(n_samples_);
  for (std::size_t s = 0; s < n_samples_; ++s) {
    const Wide v = Wide{n_} * sum_x2_[s] - Wide{sum_x_[s]} * sum_x_[s];
    x_den[s] = static_cast<double>(v);
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(kGuesses); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const double h_den = static_cast<double>(Wide{n_} * sum_h2_[k] - Wide{sum_h_[k]} * sum_h_[k]);
    if (h_den == 0.0) {
      out.degenerate[k] = 1;
      continue;
    }
    const std::int64_t* row = sum_hx_.data() + k * n_samples_;
    double* dst = out.r.data() + k * n_samples_;
    for (std::size_t s = 0; s < n_samples_; ++s) {
      if (x_den[s] == 0.0) continue;
      const Wide num = Wide{n_} * row[s] - Wide{sum_h_[k]} * sum_x_[s];
      dst[s] = static_cast<double>(num) / std::sqrt(h_den * x_den[s]);
    }
  }
  return out;
}

}  // namespace slacksim::sca
