#include "slacksim/ooo/pipeline_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "slacksim/util/kv_file.hpp"

namespace slacksim::ooo {

void PipelineConfig::validate() const {
  const unsigned counts[] = {rob_entries, fetch_buffer, iq_entries, mem_units, alu_units, fpu_units,
                             dispatch_width, issue_width, latency.alu, latency.branch, latency.load_hit,
                             latency.load_miss, latency.store, l1_line_bytes};
  for (unsigned c : counts) {
    if (c == 0) throw std::invalid_argument("pipeline counts and latencies must be >= 1");
  }
  if (issue_width > total_units()) throw std::invalid_argument("issue width exceeds the number of execution units");
  if (l1_size_bytes < l1_line_bytes || l1_size_bytes % l1_line_bytes != 0) {
    throw std::invalid_argument("L1 size must be a multiple of the line size");
  }
}

void validate(const SchedulerMode& mode) {
  if (const auto* rd = std::get_if<RandomDelay>(&mode)) {
    if (!(rd->probability >= 0.0 && rd->probability <= 1.0)) throw std::invalid_argument("random-delay probability must be in [0, 1]");
    if (rd->max_delay < 1) throw std::invalid_argument("random-delay max_delay must be >= 1");
  }
  if (const auto* ss = std::get_if<SlackScheduled>(&mode)) ss->slack.validate();
}

std::string describe(const SchedulerMode& mode) {
  std::ostringstream os;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, InOrder>) {
          os << "in-order";
        } else if constexpr (std::is_same_v<T, OutOfOrder>) {
          os << "out-of-order";
        } else if constexpr (std::is_same_v<T, RandomDelay>) {
          os << "out-of-order + random delay (p=" << m.probability << ", max=" << m.max_delay << ")";
        } else {
          os << "out-of-order + slack unit (" << m.slack.ways << "-way, " << m.slack.sets << "-set)";
        }
      },
      mode);
  return os.str();
}

ConfigBundle parse_config(std::string_view text) {
  const auto kv = KeyValueFile::parse(text, "<pipeline config>");
  ConfigBundle b;
  auto& p = b.pipeline;
  const auto u = [&](const char* key, unsigned def) { return static_cast<unsigned>(kv.get_uint(key, def)); };
  p.rob_entries = u("rob_entries", p.rob_entries);
  p.fetch_buffer = u("fetch_buffer", p.fetch_buffer);
  p.iq_entries = u("iq_entries", p.iq_entries);
  p.mem_units = u("mem_units", p.mem_units);
  p.alu_units = u("alu_units", p.alu_units);
  p.fpu_units = u("fpu_units", p.fpu_units);
  p.dispatch_width = u("dispatch_width", p.dispatch_width);
  p.issue_width = u("issue_width", p.issue_width);
  p.latency.alu = u("latency.alu", p.latency.alu);
  p.latency.branch = u("latency.branch", p.latency.branch);
  p.latency.load_hit = u("latency.load_hit", p.latency.load_hit);
  p.latency.load_miss = u("latency.load_miss", p.latency.load_miss);
  p.latency.store = u("latency.store", p.latency.store);
  p.l1_size_bytes = u("l1.size_bytes", p.l1_size_bytes);
  p.l1_line_bytes = u("l1.line_bytes", p.l1_line_bytes);
  p.branch_penalty = u("branch_penalty", p.branch_penalty);
  b.slack.ways = u("slack.ways", b.slack.ways);
  b.slack.sets = u("slack.sets", b.slack.sets);
  b.slack.pc_offset_bits = u("slack.pc_offset_bits", b.slack.pc_offset_bits);
  b.slack.slack_field_bits = u("slack.slack_field_bits", b.slack.slack_field_bits);
  if (const auto unused = kv.unused_keys(); !unused.empty()) throw ConfigError("unknown pipeline config key `" + unused.front() + "`");
  p.validate();
  b.slack.validate();
  return b;
}

ConfigBundle load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const PipelineConfig& p, const slack::SlackConfig& s) {
  std::ostringstream os;
  os << "rob_entries = " << p.rob_entries << '\n'
     << "fetch_buffer = " << p.fetch_buffer << '\n'
     << "iq_entries = " << p.iq_entries << '\n'
     << "mem_units = " << p.mem_units << '\n'
     << "alu_units = " << p.alu_units << '\n'
     << "fpu_units = " << p.fpu_units << '\n'
     << "dispatch_width = " << p.dispatch_width << '\n'
     << "issue_width = " << p.issue_width << '\n'
     << "latency.alu = " << p.latency.alu << '\n'
     << "latency.branch = " << p.latency.branch << '\n'
     << "latency.load_hit = " << p.latency.load_hit << '\n'
     << "latency.load_miss = " << p.latency.load_miss << '\n'
     << "latency.store = " << p.latency.store << '\n'
     << "l1.size_bytes = " << p.l1_size_bytes << '\n'
     << "l1.line_bytes = " << p.l1_line_bytes << '\n'
     << "branch_penalty = " << p.branch_penalty << '\n'
     << "slack.ways = " << s.ways << '\n'
     << "slack.sets = " << s.sets << '\n'
     << "slack.pc_offset_bits = " << s.pc_offset_bits << '\n'
     << "slack.slack_field_bits = " << s.slack_field_bits << '\n';
  return os.str();
}

}  // namespace slacksim::ooo
