#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slacksim/isa/interpreter.hpp"
#include "slacksim/ooo/pipeline_config.hpp"
#include "slacksim/slack/slack_unit.hpp"
#include "slacksim/util/prng.hpp"

namespace slacksim::ooo {

enum class SimErrorKind {
  FunctionalDivergence,
  StepLimitExceeded,
  Deadlock,
};

class SimError : public std::runtime_error {
 public:
  SimError(SimErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  SimErrorKind kind() const noexcept { return kind_; }

 private:
  SimErrorKind kind_;
};

inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

struct DynamicInstruction {
  std::uint64_t seq = 0;
  std::uint32_t pc = 0;
  isa::Opcode op = isa::Opcode::HALT;
  std::uint64_t dispatch_cycle = kNever;
  /// Completion cycle of each register producer (t0, t1); kNever for unused slots.
  std::array<std::uint64_t, 2> operand_ready{kNever, kNever};
  std::array<std::int64_t, 2> producer_seq{-1, -1};
  std::uint8_t num_producers = 0;
  unsigned extra_delay = 0;
  std::uint64_t issue_cycle = kNever;
  std::uint64_t complete_cycle = kNever;
  /// Write-back happens in the completion cycle.
  std::uint64_t wb_cycle = kNever;
  std::optional<isa::Reg> dst;
  std::optional<std::uint32_t> wb_value;
};

struct ExecutionRecord {
  std::vector<DynamicInstruction> insts;
  std::uint64_t total_cycles = 0;
  double ipc = 0.0;
  /// Write-back values of cycle c are wb_values[wb_index[c] .. wb_index[c + 1]).
  std::vector<std::uint32_t> wb_index;
  std::vector<std::uint32_t> wb_values;
  /// Data memory as left by the timing model's own loads and stores.
  isa::Memory final_memory;

  std::span<const std::uint32_t> writebacks_at(std::uint64_t cycle) const noexcept;
  /// Number of cycles covered by the write-back index.
  std::uint64_t indexed_cycles() const noexcept { return wb_index.empty() ? 0 : wb_index.size() - 1; }
};

/// Cycle-level timing model. One Core owns its PRNG and (in slack mode) its
/// Slack Unit, both of which persist across run() calls so a core can be fed
/// encryption after encryption like real hardware. Caches start cold on every run.
class Core {
 public:
  Core(PipelineConfig config, SchedulerMode mode, std::uint64_t seed);

  /// Times the dynamic stream `stream[0 .. limit)` starting from `initial`.
  /// Every computed write-back is checked against the stream.
  ExecutionRecord run(std::span<const isa::RetiredOp> stream, const isa::ArchState& initial,
                      std::size_t limit = std::numeric_limits<std::size_t>::max());

  const PipelineConfig& config() const noexcept { return config_; }
  const SchedulerMode& mode() const noexcept { return mode_; }

  slack::SlackUnit* slack_unit() noexcept { return slack_.get(); }
  const slack::SlackUnit* slack_unit() const noexcept { return slack_.get(); }
  void restore_slack_unit(const slack::SlackUnit& snapshot);

  Prng& rng() noexcept { return rng_; }
  void reseed(std::uint64_t seed) noexcept { rng_ = Prng(seed); }

 private:
  PipelineConfig config_;
  SchedulerMode mode_;
  Prng rng_;
  std::unique_ptr<slack::SlackUnit> slack_;
};

inline constexpr std::uint64_t kDefaultMaxSteps = 1'000'000;

/// Functional run followed by a timing run on a fresh core.
ExecutionRecord simulate(const isa::Program& program, const isa::Inputs& inputs, const PipelineConfig& config,
                         const SchedulerMode& mode, std::uint64_t seed, std::uint64_t max_steps = kDefaultMaxSteps);

/// IPC(a) / IPC(b). Throws std::invalid_argument when either record has zero cycles.
double ipc_ratio(const ExecutionRecord& a, const ExecutionRecord& b);

}  // namespace slacksim::ooo
