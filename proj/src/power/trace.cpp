#include "slacksim/power/trace.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace slacksim::power {

PowerTrace trace_from_record(const ooo::ExecutionRecord& record, std::optional<std::uint64_t> last_cycle,
                             std::span<const isa::RetiredOp> stream) {
  std::uint64_t n = record.indexed_cycles();
  if (last_cycle) n = std::min<std::uint64_t>(n, *last_cycle + 1);
  PowerTrace t;
  t.samples.resize(n, 0);
  for (std::uint64_t c = 0; c < n; ++c) {
    std::uint32_t sum = 0;
    for (std::uint32_t v : record.writebacks_at(c)) sum += static_cast<std::uint32_t>(std::popcount(v));
    t.samples[c] = sum;
  }
  const std::size_t timed = std::min(stream.size(), record.insts.size());
  for (std::size_t i = 0; i < timed; ++i) {
    if (!stream[i].store_value) continue;
    const auto c = record.insts[i].complete_cycle;
    if (c < n) t.samples[c] += static_cast<std::uint32_t>(std::popcount(*stream[i].store_value));
  }
  return t;
}

const char* to_string(SetKind kind) noexcept { return kind == SetKind::Attack ? "attack" : "profiling"; }

TraceSet::TraceSet(SetKind k, std::size_t n_traces, std::size_t n_samples)
    : kind(k), n_samples_(n_samples), plaintexts_(n_traces), keys_(n_traces), samples_(n_traces * n_samples, 0) {}

TraceSet TraceSet::slice(std::size_t first, std::size_t count) const {
  if (first + count > size()) throw std::out_of_range("trace slice out of range");
  TraceSet out(kind, count, n_samples_);
  out.config_id = config_id;
  out.master_seed = master_seed;
  std::copy_n(plaintexts_.begin() + static_cast<std::ptrdiff_t>(first), count, out.plaintexts_.begin());
  std::copy_n(keys_.begin() + static_cast<std::ptrdiff_t>(first), count, out.keys_.begin());
  std::copy_n(samples_.begin() + static_cast<std::ptrdiff_t>(first * n_samples_), count * n_samples_, out.samples_.begin());
  return out;
}

TraceSet TraceSet::with_length(std::size_t n_samples) const {
  TraceSet out(kind, size(), n_samples);
  out.config_id = config_id;
  out.master_seed = master_seed;
  out.plaintexts_ = plaintexts_;
  out.keys_ = keys_;
  const std::size_t keep = std::min(n_samples, n_samples_);
  for (std::size_t i = 0; i < size(); ++i) std::copy_n(trace(i).begin(), keep, out.trace(i).begin());
  return out;
}

TraceSet pad_traces(SetKind kind, std::span<const PowerTrace> traces, std::span<const Block> plaintexts,
                    std::span<const Block> keys) {
  if (plaintexts.size() != traces.size() || keys.size() != traces.size()) {
    throw std::invalid_argument("trace, plaintext and key counts differ");
  }
  std::size_t len = 0;
  for (const auto& t : traces) len = std::max(len, t.samples.size());
  TraceSet ts(kind, traces.size(), len);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    std::copy(traces[i].samples.begin(), traces[i].samples.end(), ts.trace(i).begin());
    ts.plaintext(i) = plaintexts[i];
    ts.key(i) = keys[i];
  }
  return ts;
}

}  // namespace slacksim::power
