#include "slacksim/ooo/core.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace slacksim::ooo {

using isa::Opcode;

std::span<const std::uint32_t> ExecutionRecord::writebacks_at(std::uint64_t cycle) const noexcept {
  if (cycle + 1 >= wb_index.size()) return {};
  return std::span<const std::uint32_t>(wb_values).subspan(wb_index[cycle], wb_index[cycle + 1] - wb_index[cycle]);
}

namespace {

enum class UnitClass : std::uint8_t { Mem = 0, Alu = 1, Fpu = 2 };

UnitClass unit_class(Opcode op) { return isa::is_memory(op) ? UnitClass::Mem : UnitClass::Alu; }

/// Direct-mapped tag array; starts cold.
class L1Cache {
 public:
  L1Cache(unsigned size_bytes, unsigned line_bytes) : line_bytes_(line_bytes), tags_(size_bytes / line_bytes, -1) {}

  /// Returns true on hit for every line touched; installs missing lines.
  bool access(std::uint32_t addr, int size) {
    bool hit = true;
    const std::uint32_t first = addr / line_bytes_;
    const std::uint32_t last = (addr + static_cast<std::uint32_t>(size) - 1) / line_bytes_;
    for (std::uint32_t line = first; line <= last; ++line) {
      auto& tag = tags_[line % tags_.size()];
      if (tag != static_cast<std::int64_t>(line)) {
        hit = false;
        tag = line;
      }
    }
    return hit;
  }

 private:
  std::uint32_t line_bytes_;
  std::vector<std::int64_t> tags_;
};

struct StaticInfo {
  UnitClass unit = UnitClass::Alu;
  std::array<std::int64_t, 2> producer{-1, -1};
  std::uint8_t num_producers = 0;
  std::uint32_t mem_dep_begin = 0;
  std::uint32_t mem_dep_end = 0;
};

// Register producers and memory ordering constraints of the window.
void analyse(std::span<const isa::RetiredOp> ops, std::vector<StaticInfo>& info, std::vector<std::uint32_t>& mem_deps) {
  std::array<std::int64_t, isa::kNumRegs> last_writer;
  last_writer.fill(-1);
  std::unordered_map<std::uint32_t, std::int64_t> last_store;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> loads_since_store;

  info.assign(ops.size(), StaticInfo{});
  mem_deps.clear();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    auto& si = info[i];
    si.unit = unit_class(op.op);
    for (std::uint8_t s = 0; s < op.num_src; ++s) {
      const isa::Reg r = op.src[s];
      if (r == 0 || last_writer[r] < 0) continue;
      const std::int64_t p = last_writer[r];
      if (si.num_producers == 1 && si.producer[0] == p) continue;
      si.producer[si.num_producers++] = p;
    }
    si.mem_dep_begin = static_cast<std::uint32_t>(mem_deps.size());
    if (op.mem_addr) {
      const int size = isa::access_size(op.op);
      const bool store = isa::is_store(op.op);
      for (int b = 0; b < size; ++b) {
        const std::uint32_t addr = *op.mem_addr + static_cast<std::uint32_t>(b);
        if (auto it = last_store.find(addr); it != last_store.end()) mem_deps.push_back(static_cast<std::uint32_t>(it->second));
        auto& loads = loads_since_store[addr];
        if (store) {
          mem_deps.insert(mem_deps.end(), loads.begin(), loads.end());
          loads.clear();
          last_store[addr] = static_cast<std::int64_t>(i);
        } else {
          loads.push_back(static_cast<std::uint32_t>(i));
        }
      }
      auto first = mem_deps.begin() + si.mem_dep_begin;
      std::sort(first, mem_deps.end());
      mem_deps.erase(std::unique(first, mem_deps.end()), mem_deps.end());
    }
    si.mem_dep_end = static_cast<std::uint32_t>(mem_deps.size());
    if (op.dst && *op.dst != 0) last_writer[*op.dst] = static_cast<std::int64_t>(i);
  }
}

[[noreturn]] void divergence(const isa::RetiredOp& op, const char* what, std::uint64_t got, std::uint64_t want) {
  std::ostringstream os;
  os << "timing model diverged from functional reference at seq " << op.seq << " (pc 0x" << std::hex << op.pc << ", "
     << isa::mnemonic(op.op) << "): " << what << " 0x" << got << " != 0x" << want;
  throw SimError(SimErrorKind::FunctionalDivergence, os.str());
}

}  // namespace

Core::Core(PipelineConfig config, SchedulerMode mode, std::uint64_t seed) : config_(config), mode_(std::move(mode)), rng_(seed) {
  config_.validate();
  validate(mode_);
  if (const auto* ss = std::get_if<SlackScheduled>(&mode_)) slack_ = std::make_unique<slack::SlackUnit>(ss->slack);
}

void Core::restore_slack_unit(const slack::SlackUnit& snapshot) {
  if (!slack_) throw std::logic_error("core has no slack unit");
  *slack_ = snapshot;
}

ExecutionRecord Core::run(std::span<const isa::RetiredOp> stream, const isa::ArchState& initial, std::size_t limit) {
  const std::size_t n = std::min(limit, stream.size());
  const auto ops = stream.first(n);

  std::vector<StaticInfo> info;
  std::vector<std::uint32_t> mem_deps;
  analyse(ops, info, mem_deps);

  ExecutionRecord rec;
  rec.insts.resize(n);
  auto& insts = rec.insts;
  for (std::size_t i = 0; i < n; ++i) {
    auto& d = insts[i];
    d.seq = ops[i].seq;
    d.pc = ops[i].pc;
    d.op = ops[i].op;
    d.num_producers = info[i].num_producers;
    d.producer_seq = info[i].producer;
    d.dst = ops[i].dst;
  }

  const bool in_order = std::holds_alternative<InOrder>(mode_);
  const auto* random_delay = std::get_if<RandomDelay>(&mode_);
  std::vector<std::uint8_t> slack_injected(n, 0);

  // Dataflow values recomputed by the timing model.
  std::vector<std::uint32_t> value(n, 0);
  isa::Memory memory = initial.mem;
  L1Cache cache(config_.l1_size_bytes, config_.l1_line_bytes);

  std::size_t fetch_ptr = 0;
  std::size_t dispatch_ptr = 0;
  std::size_t commit_ptr = 0;
  std::size_t next_in_order = 0;
  std::int64_t pending_branch = -1;
  std::uint64_t fetch_resume = 0;
  std::array<unsigned, 3> iq_occupancy{};
  const std::array<unsigned, 3> units{config_.mem_units, config_.alu_units, config_.fpu_units};

  const std::uint64_t cycle_cap = 64 + 4096ULL * (n + 1);

  const auto operand = [&](std::size_t i, int slot) -> std::uint32_t {
    const isa::Reg r = ops[i].src[static_cast<std::size_t>(slot)];
    if (r == 0) return 0;
    for (std::uint8_t k = 0; k < info[i].num_producers; ++k) {
      const auto p = static_cast<std::size_t>(info[i].producer[k]);
      if (ops[p].dst && *ops[p].dst == r) return value[p];
    }
    return initial.regs[r];
  };

  // Executes instruction i at issue; returns its latency.
  const auto execute = [&](std::size_t i) -> unsigned {
    const auto& op = ops[i];
    const std::uint32_t a = op.num_src >= 1 ? operand(i, 0) : 0;
    const std::uint32_t b = op.num_src >= 2 ? operand(i, 1) : 0;
    unsigned latency = config_.latency.alu;
    std::optional<std::uint32_t> result;
    switch (isa::format_of(op.op)) {
      case isa::Format::R:
      case isa::Format::I:
      case isa::Format::U:
        result = isa::alu_result(op.op, a, b, op.imm);
        break;
      case isa::Format::Load: {
        const std::uint32_t addr = a + static_cast<std::uint32_t>(op.imm);
        if (addr != *op.mem_addr) divergence(op, "load address", addr, *op.mem_addr);
        const bool hit = cache.access(addr, isa::access_size(op.op));
        latency = hit ? config_.latency.load_hit : config_.latency.load_miss;
        result = op.op == Opcode::LBU ? memory.load8(addr) : memory.load32(addr);
        break;
      }
      case isa::Format::Store: {
        const std::uint32_t addr = a + static_cast<std::uint32_t>(op.imm);
        if (addr != *op.mem_addr) divergence(op, "store address", addr, *op.mem_addr);
        cache.access(addr, isa::access_size(op.op));
        latency = config_.latency.store;
        const std::uint32_t stored = op.op == Opcode::SB ? (b & 0xFFU) : b;
        if (op.store_value && stored != *op.store_value) divergence(op, "store value", stored, *op.store_value);
        if (op.op == Opcode::SB) {
          memory.store8(addr, static_cast<std::uint8_t>(b));
        } else {
          memory.store32(addr, b);
        }
        break;
      }
      case isa::Format::Branch: {
        latency = config_.latency.branch;
        const bool taken = op.op == Opcode::BEQ ? (a == b) : (a != b);
        if (taken != op.branch_taken) divergence(op, "branch outcome", taken, op.branch_taken);
        break;
      }
      case isa::Format::Jump:
        latency = config_.latency.branch;
        result = op.pc + 4;
        break;
      case isa::Format::None:
        break;
    }
    if (op.dst && *op.dst != 0) {
      if (!result) divergence(op, "missing result", 0, 0);
      if (op.wb_value && *result != *op.wb_value) divergence(op, "write-back", *result, *op.wb_value);
      value[i] = *result;
    }
    return latency;
  };

  std::vector<slack::ProducerObservation> observed;
  observed.reserve(2);

  std::uint64_t cycle = 0;
  for (; commit_ptr < n; ++cycle) {
    if (cycle > cycle_cap) throw SimError(SimErrorKind::Deadlock, "pipeline made no progress");

    // Commit, in order, once written back.
    for (unsigned k = 0; k < config_.dispatch_width && commit_ptr < dispatch_ptr; ++k) {
      if (insts[commit_ptr].complete_cycle > cycle) break;
      ++commit_ptr;
    }

    // Dispatch from the fetch buffer into the ROB and issue queues.
    for (unsigned k = 0; k < config_.dispatch_width && dispatch_ptr < fetch_ptr; ++k) {
      const auto cls = static_cast<std::size_t>(info[dispatch_ptr].unit);
      if (dispatch_ptr - commit_ptr >= config_.rob_entries) break;
      if (iq_occupancy[cls] >= config_.iq_entries) break;
      auto& d = insts[dispatch_ptr];
      d.dispatch_cycle = cycle;
      if (random_delay != nullptr) {
        if (rng_.bernoulli(random_delay->probability)) {
          d.extra_delay = 1 + static_cast<unsigned>(rng_.uniform(random_delay->max_delay - 1));
        }
      } else if (slack_) {
        if (const auto decision = slack_->on_dispatch(d.pc, rng_)) {
          d.extra_delay = decision->delay;
          slack_injected[dispatch_ptr] = 1;
        }
      }
      ++iq_occupancy[cls];
      ++dispatch_ptr;
    }

    // Issue: oldest first over the window, bounded by units and issue width.
    std::array<unsigned, 3> used{};
    unsigned issued = 0;
    for (std::size_t i = commit_ptr; i < dispatch_ptr && issued < config_.issue_width; ++i) {
      auto& d = insts[i];
      if (d.issue_cycle != kNever) continue;
      if (in_order && i != next_in_order) break;
      const auto& si = info[i];

      bool ready = true;
      std::uint64_t ops_ready = 0;
      for (std::uint8_t k = 0; k < si.num_producers; ++k) {
        const std::uint64_t c = insts[static_cast<std::size_t>(si.producer[k])].complete_cycle;
        if (c == kNever || c > cycle) {
          ready = false;
          break;
        }
        ops_ready = std::max(ops_ready, c);
      }
      if (ready) {
        if (std::max(d.dispatch_cycle, ops_ready) + d.extra_delay > cycle) ready = false;
      }
      if (ready) {
        for (std::uint32_t m = si.mem_dep_begin; m < si.mem_dep_end; ++m) {
          const std::uint64_t c = insts[mem_deps[m]].complete_cycle;
          if (c == kNever || c > cycle) {
            ready = false;
            break;
          }
        }
      }
      const auto cls = static_cast<std::size_t>(si.unit);
      if (ready && used[cls] >= units[cls]) ready = false;
      if (!ready) {
        if (in_order) break;
        continue;
      }

      ++used[cls];
      ++issued;
      --iq_occupancy[cls];
      if (in_order) ++next_in_order;
      d.issue_cycle = cycle;
      const unsigned latency = execute(i);
      d.complete_cycle = cycle + latency;
      d.wb_cycle = d.complete_cycle;
      if (ops[i].wb_value) d.wb_value = value[i];
      for (std::uint8_t k = 0; k < si.num_producers; ++k) {
        d.operand_ready[k] = insts[static_cast<std::size_t>(si.producer[k])].complete_cycle;
      }

      if (slack_ && si.num_producers == 2) {
        observed.clear();
        for (std::uint8_t k = 0; k < 2; ++k) {
          const auto p = static_cast<std::size_t>(si.producer[k]);
          observed.push_back({insts[p].pc, insts[p].complete_cycle, slack_injected[p] ? insts[p].extra_delay : 0U});
        }
        slack_->observe_issue(d.pc, observed);
      }
    }

    // Fetch; control instructions stall fetch until resolved plus the redirect penalty.
    if (pending_branch >= 0) {
      const auto& br = insts[static_cast<std::size_t>(pending_branch)];
      if (br.complete_cycle != kNever) {
        fetch_resume = br.complete_cycle + config_.branch_penalty;
        pending_branch = -1;
      }
    }
    if (pending_branch < 0 && cycle >= fetch_resume) {
      for (unsigned k = 0; k < config_.dispatch_width && fetch_ptr < n; ++k) {
        if (fetch_ptr - dispatch_ptr >= config_.fetch_buffer) break;
        const bool control = isa::is_control(ops[fetch_ptr].op);
        ++fetch_ptr;
        if (control) {
          pending_branch = static_cast<std::int64_t>(fetch_ptr - 1);
          break;
        }
      }
    }
  }

  std::uint64_t last = 0;
  for (const auto& d : insts) last = std::max(last, d.complete_cycle);
  rec.total_cycles = last;
  rec.final_memory = std::move(memory);
  rec.ipc = last == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(last);

  // Counting sort of write-backs by cycle.
  rec.wb_index.assign(last + 2, 0);
  for (const auto& d : insts) {
    if (d.wb_value) ++rec.wb_index[d.wb_cycle + 1];
  }
  for (std::size_t c = 1; c < rec.wb_index.size(); ++c) rec.wb_index[c] += rec.wb_index[c - 1];
  rec.wb_values.assign(rec.wb_index.back(), 0);
  std::vector<std::uint32_t> cursor(rec.wb_index.begin(), rec.wb_index.end() - 1);
  for (const auto& d : insts) {
    if (d.wb_value) rec.wb_values[cursor[d.wb_cycle]++] = *d.wb_value;
  }
  return rec;
}

ExecutionRecord simulate(const isa::Program& program, const isa::Inputs& inputs, const PipelineConfig& config,
                         const SchedulerMode& mode, std::uint64_t seed, std::uint64_t max_steps) {
  isa::FunctionalResult fr;
  try {
    fr = isa::run_functional(program, inputs, max_steps);
  } catch (const isa::ExecError& e) {
    if (e.kind() == isa::ExecErrorKind::StepLimitExceeded) throw SimError(SimErrorKind::StepLimitExceeded, e.what());
    throw;
  }
  Core core(config, mode, seed);
  return core.run(fr.stream, isa::initial_state(program, inputs));
}

double ipc_ratio(const ExecutionRecord& a, const ExecutionRecord& b) {
  if (a.total_cycles == 0 || b.total_cycles == 0) throw std::invalid_argument("ipc_ratio: record with zero cycles");
  return a.ipc / b.ipc;
}

}  // namespace slacksim::ooo
