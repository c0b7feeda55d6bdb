#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slacksim/ooo/pipeline_config.hpp"

namespace slacksim::harness {

struct CoreConfig {
  std::string name;
  ooo::PipelineConfig pipeline;
  ooo::SchedulerMode mode;
};

/// ooo-baseline, io-baseline, paradise, random-iso-perf, random-iso-security, random-aggressive.
const std::vector<std::string>& core_names();

/// Throws ConfigError for an unknown name. `bundle` supplies the pipeline and
/// Slack Unit geometry shared by every core.
CoreConfig core_config(std::string_view name, const ooo::ConfigBundle& bundle = {});
std::vector<CoreConfig> all_core_configs(const ooo::ConfigBundle& bundle = {});

std::string describe(const CoreConfig& core);

}  // namespace slacksim::harness
