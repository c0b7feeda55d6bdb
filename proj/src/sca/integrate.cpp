#include "slacksim/sca/integrate.hpp"

#include <stdexcept>

namespace slacksim::sca {

power::TraceSet integrate_traces(const power::TraceSet& ts, std::size_t window) {
  if (window == 0) throw std::invalid_argument("integration window must be >= 1");
  const std::size_t len = ts.n_samples();
  const std::size_t out_len = len == 0 ? 0 : (len + window - 1) / window;
  power::TraceSet out(ts.kind, ts.size(), out_len);
  out.config_id = ts.config_id;
  out.master_seed = ts.master_seed;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.plaintext(i) = ts.plaintext(i);
    out.key(i) = ts.key(i);
    const auto src = ts.trace(i);
    auto dst = out.trace(i);
    for (std::size_t s = 0; s < len; ++s) dst[s / window] += src[s];
  }
  return out;
}

}  // namespace slacksim::sca
