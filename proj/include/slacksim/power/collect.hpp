#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "slacksim/isa/assembler.hpp"
#include "slacksim/ooo/core.hpp"
#include "slacksim/power/trace.hpp"

namespace slacksim::power {

inline constexpr Block kDefaultAttackKey{0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07,
                                         0x08, 0x09, 0x0a, 0x0b, 0x0c, 0x0d, 0x0e, 0x0f};

struct CollectOptions {
  SetKind kind = SetKind::Attack;
  std::size_t n_traces = 1;
  std::uint64_t master_seed = 1;
  Block attack_key = kDefaultAttackKey;
  /// Record only up to the completion of the first round.
  bool truncate_first_round = false;
  /// Add HW of store data to the cycle each store completes.
  bool include_store_data = false;
  /// Use this plaintext for every trace (fixed class of a fixed-vs-random test).
  std::optional<Block> fixed_plaintext;
  /// Encryptions run through the Slack Unit before collection starts; every
  /// trace then begins from that trained table state.
  unsigned warmup_encryptions = 20;
  std::string config_id;
};

class CollectError : public std::runtime_error {
 public:
  CollectError(std::size_t trace_index, const std::string& what)
      : std::runtime_error("trace " + std::to_string(trace_index) + ": " + what), index_(trace_index) {}
  std::size_t trace_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Symbol names the AES program must export.
struct AesLayout {
  std::uint32_t key;
  std::uint32_t plaintext;
  std::uint32_t ciphertext;
  std::uint32_t round_end;

  static AesLayout of(const isa::Program& program);
};

isa::Inputs aes_inputs(const AesLayout& layout, const Block& key, const Block& plaintext);

/// Plaintext and key of trace `index`, derived from the master seed only.
struct TraceInputs {
  Block plaintext;
  Block key;
  std::uint64_t sim_seed;
};
TraceInputs derive_trace_inputs(const CollectOptions& options, std::size_t index);

/// Trained Slack Unit after `options.warmup_encryptions` encryptions, or
/// nullopt for modes without one.
std::optional<slack::SlackUnit> warm_slack_unit(const isa::Program& program, const ooo::PipelineConfig& config,
                                                const ooo::SchedulerMode& mode, const CollectOptions& options);

/// Simulates `options.n_traces` encryptions and records their power traces.
/// Traces are independent, so the loop runs in parallel; the result does not
/// depend on the number of threads.
TraceSet collect_set(const isa::Program& program, const ooo::PipelineConfig& config, const ooo::SchedulerMode& mode,
                     const CollectOptions& options);

}  // namespace slacksim::power
