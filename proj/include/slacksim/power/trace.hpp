#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slacksim/ooo/core.hpp"

namespace slacksim::power {

using Block = std::array<std::uint8_t, 16>;

/// Per-cycle Hamming-weight power samples of one encryption.
struct PowerTrace {
  std::vector<std::uint32_t> samples;
};

/// sample[T] = sum of HW(v) over the register write-backs v of cycle T.
/// With `last_cycle`, samples after that cycle are dropped. When `stream` is
/// the retired stream the record was timed from, HW of each store's data is
/// added in the cycle the store completes.
PowerTrace trace_from_record(const ooo::ExecutionRecord& record, std::optional<std::uint64_t> last_cycle = std::nullopt,
                             std::span<const isa::RetiredOp> stream = {});

enum class SetKind : std::uint8_t { Attack = 0, Profiling = 1 };

const char* to_string(SetKind kind) noexcept;

/// Equal-length traces stored row-major, plus per-trace plaintext and key.
class TraceSet {
 public:
  TraceSet() = default;
  TraceSet(SetKind kind, std::size_t n_traces, std::size_t n_samples);

  SetKind kind = SetKind::Attack;
  std::string config_id;
  std::uint64_t master_seed = 0;

  std::size_t size() const noexcept { return plaintexts_.size(); }
  std::size_t n_samples() const noexcept { return n_samples_; }

  std::span<const std::uint32_t> trace(std::size_t i) const { return {samples_.data() + i * n_samples_, n_samples_}; }
  std::span<std::uint32_t> trace(std::size_t i) { return {samples_.data() + i * n_samples_, n_samples_}; }
  const std::vector<std::uint32_t>& samples() const noexcept { return samples_; }

  Block& plaintext(std::size_t i) { return plaintexts_[i]; }
  const Block& plaintext(std::size_t i) const { return plaintexts_[i]; }
  Block& key(std::size_t i) { return keys_[i]; }
  const Block& key(std::size_t i) const { return keys_[i]; }

  /// Traces [first, first + count) as a new set with the same metadata.
  TraceSet slice(std::size_t first, std::size_t count) const;
  /// Copy zero-padded or cut to `n_samples` samples per trace.
  TraceSet with_length(std::size_t n_samples) const;

  friend bool operator==(const TraceSet&, const TraceSet&) = default;

 private:
  std::size_t n_samples_ = 0;
  std::vector<Block> plaintexts_;
  std::vector<Block> keys_;
  std::vector<std::uint32_t> samples_;
};

/// Builds a set from variable-length traces, zero-padding to the longest one.
TraceSet pad_traces(SetKind kind, std::span<const PowerTrace> traces, std::span<const Block> plaintexts,
                    std::span<const Block> keys);

}  // namespace slacksim::power
