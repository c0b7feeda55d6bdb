#include "slacksim/harness/core_configs.hpp"

#include <sstream>

#include "slacksim/util/kv_file.hpp"

namespace slacksim::harness {

namespace {
constexpr unsigned kRandomMaxDelay = 8;
}

const std::vector<std::string>& core_names() {
  static const std::vector<std::string> names = {"ooo-baseline",    "io-baseline",         "paradise",
                                                 "random-iso-perf", "random-iso-security", "random-aggressive"};
  return names;
}

CoreConfig core_config(std::string_view name, const ooo::ConfigBundle& bundle) {
  CoreConfig c{std::string(name), bundle.pipeline, ooo::OutOfOrder{}};
  if (name == "ooo-baseline") {
    c.mode = ooo::OutOfOrder{};
  } else if (name == "io-baseline") {
    c.mode = ooo::InOrder{};
  } else if (name == "paradise") {
    c.mode = ooo::SlackScheduled{bundle.slack};
  } else if (name == "random-iso-perf") {
    c.mode = ooo::RandomDelay{0.05, kRandomMaxDelay};
  } else if (name == "random-iso-security") {
    c.mode = ooo::RandomDelay{0.20, kRandomMaxDelay};
  } else if (name == "random-aggressive") {
    c.mode = ooo::RandomDelay{1.0, kRandomMaxDelay};
  } else {
    throw ConfigError("unknown core `" + std::string(name) + "`");
  }
  return c;
}

std::vector<CoreConfig> all_core_configs(const ooo::ConfigBundle& bundle) {
  std::vector<CoreConfig> out;
  for (const auto& n : core_names()) out.push_back(core_config(n, bundle));
  return out;
}

std::string describe(const CoreConfig& core) {
  std::ostringstream os;
  os << "[" << core.name << "]\n";
  os << "mode = " << ooo::describe(core.mode) << '\n';
  const auto slack = std::holds_alternative<ooo::SlackScheduled>(core.mode) ? std::get<ooo::SlackScheduled>(core.mode).slack
                                                                             : slack::SlackConfig{};
  os << ooo::to_text(core.pipeline, slack);
  return os.str();
}

}  // namespace slacksim::harness
