#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "slacksim/slack/slack_unit.hpp"

namespace slacksim::ooo {

struct Latencies {
  unsigned alu = 1;
  unsigned branch = 1;
  unsigned load_hit = 3;
  unsigned load_miss = 20;
  unsigned store = 1;
  friend bool operator==(const Latencies&, const Latencies&) = default;
};

/// Timing parameters of the core. Defaults follow the reference SonicBOOM-class
/// configuration: 96-entry ROB, 24-entry fetch buffer, three 8-entry issue
/// queues (MEM, ALU, FPU) feeding 1 MEM + 3 ALU + 1 FPU units.
struct PipelineConfig {
  unsigned rob_entries = 96;
  unsigned fetch_buffer = 24;
  unsigned iq_entries = 8;  // per queue
  unsigned mem_units = 1;
  unsigned alu_units = 3;
  unsigned fpu_units = 1;
  unsigned dispatch_width = 3;
  unsigned issue_width = 3;
  Latencies latency;
  unsigned l1_size_bytes = 32 * 1024;
  unsigned l1_line_bytes = 64;
  unsigned branch_penalty = 3;

  void validate() const;
  unsigned total_units() const noexcept { return mem_units + alu_units + fpu_units; }
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct InOrder {
  friend bool operator==(const InOrder&, const InOrder&) = default;
};
struct OutOfOrder {
  friend bool operator==(const OutOfOrder&, const OutOfOrder&) = default;
};
struct RandomDelay {
  double probability = 0.0;
  unsigned max_delay = 8;
  friend bool operator==(const RandomDelay&, const RandomDelay&) = default;
};
struct SlackScheduled {
  slack::SlackConfig slack;
  friend bool operator==(const SlackScheduled&, const SlackScheduled&) = default;
};

using SchedulerMode = std::variant<InOrder, OutOfOrder, RandomDelay, SlackScheduled>;

void validate(const SchedulerMode& mode);
std::string describe(const SchedulerMode& mode);

/// Reads `key = value` pipeline parameters (docs/config.md); keys that are
/// absent keep their compiled-in defaults. Slack geometry lives under `slack.*`.
struct ConfigBundle {
  PipelineConfig pipeline;
  slack::SlackConfig slack;
};
ConfigBundle parse_config(std::string_view text);
ConfigBundle load_config(const std::string& path);
std::string to_text(const PipelineConfig& cfg, const slack::SlackConfig& slack);

}  // namespace slacksim::ooo
