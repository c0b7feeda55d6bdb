#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slacksim/isa/instruction.hpp"
#include "slacksim/ooo/pipeline_config.hpp"

namespace slacksim::harness {

struct PerfRow {
  std::string core;
  double mean_ipc = 0.0;
  /// mean_ipc / mean_ipc(ooo-baseline)
  double normalized_ipc = 0.0;
  std::uint64_t total_cycles = 0;
  /// Slack Unit cores: encryptions until no more unstable-phase delays were injected.
  std::optional<std::size_t> unstable_phase_encryptions;
  /// Slack Unit cores: share of injected delays that were unstable-phase over
  /// the second half of the run.
  std::optional<double> steady_unstable_share;
};

struct PerfReport {
  std::size_t n_plaintexts = 0;
  std::vector<PerfRow> rows;

  const PerfRow* find(const std::string& core) const;
  std::string table() const;
  std::string csv() const;
};

/// Encrypts `n_plaintexts` random plaintexts under the fixed key on one core
/// per configuration. Predictor state (the Slack Unit) carries over between
/// encryptions; the L1 starts cold for each one.
PerfReport run_perf_pipeline(const std::vector<std::string>& cores, std::size_t n_plaintexts, std::uint64_t seed,
                             const isa::Program& program, const ooo::ConfigBundle& bundle = {});

}  // namespace slacksim::harness
