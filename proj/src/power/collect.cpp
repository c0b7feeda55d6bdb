#include "slacksim/power/collect.hpp"

#include <cstring>
#include <exception>

namespace slacksim::power {

namespace {

constexpr std::uint64_t kWarmupStream = ~std::uint64_t{0};

Block random_block(Prng& rng) {
  Block b{};
  const std::uint64_t lo = rng.next();
  const std::uint64_t hi = rng.next();
  std::memcpy(b.data(), &lo, 8);
  std::memcpy(b.data() + 8, &hi, 8);
  return b;
}

std::size_t marker_index(const std::vector<isa::RetiredOp>& stream, std::uint32_t pc) {
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].pc == pc) return i;
  }
  throw std::runtime_error("round_end marker never executed");
}

}  // namespace

AesLayout AesLayout::of(const isa::Program& program) {
  return AesLayout{program.symbol("key"), program.symbol("plaintext"), program.symbol("ciphertext"),
                   program.symbol("round_end")};
}

isa::Inputs aes_inputs(const AesLayout& layout, const Block& key, const Block& plaintext) {
  isa::Inputs in;
  in.memory.emplace_back(layout.key, std::vector<std::uint8_t>(key.begin(), key.end()));
  in.memory.emplace_back(layout.plaintext, std::vector<std::uint8_t>(plaintext.begin(), plaintext.end()));
  return in;
}

TraceInputs derive_trace_inputs(const CollectOptions& options, std::size_t index) {
  Prng rng(Prng::derive(options.master_seed, index));
  TraceInputs t{};
  t.plaintext = random_block(rng);
  if (options.fixed_plaintext) t.plaintext = *options.fixed_plaintext;
  t.key = options.kind == SetKind::Profiling ? random_block(rng) : options.attack_key;
  t.sim_seed = rng.next();
  return t;
}

std::optional<slack::SlackUnit> warm_slack_unit(const isa::Program& program, const ooo::PipelineConfig& config,
                                                const ooo::SchedulerMode& mode, const CollectOptions& options) {
  if (!std::holds_alternative<ooo::SlackScheduled>(mode)) return std::nullopt;
  const auto layout = AesLayout::of(program);
  Prng rng(Prng::derive(options.master_seed, kWarmupStream));
  ooo::Core core(config, mode, rng.next());
  for (unsigned e = 0; e < options.warmup_encryptions; ++e) {
    const Block pt = random_block(rng);
    const Block key = options.kind == SetKind::Profiling ? random_block(rng) : options.attack_key;
    const auto inputs = aes_inputs(layout, key, pt);
    const auto fr = isa::run_functional(program, inputs, ooo::kDefaultMaxSteps);
    core.run(fr.stream, isa::initial_state(program, inputs));
  }
  return *core.slack_unit();
}

TraceSet collect_set(const isa::Program& program, const ooo::PipelineConfig& config, const ooo::SchedulerMode& mode,
                     const CollectOptions& options) {
  if (options.n_traces == 0) throw std::invalid_argument("collect_set: n_traces must be >= 1");
  const auto layout = AesLayout::of(program);
  const auto warm = warm_slack_unit(program, config, mode, options);

  const auto n = static_cast<std::ptrdiff_t>(options.n_traces);
  std::vector<PowerTrace> traces(options.n_traces);
  std::vector<Block> plaintexts(options.n_traces);
  std::vector<Block> keys(options.n_traces);
  std::vector<std::string> errors(options.n_traces);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const auto in = derive_trace_inputs(options, idx);
      plaintexts[idx] = in.plaintext;
      keys[idx] = in.key;
      const auto inputs = aes_inputs(layout, in.key, in.plaintext);
      const auto fr = isa::run_functional(program, inputs, ooo::kDefaultMaxSteps);
      ooo::Core core(config, mode, in.sim_seed);
      if (warm) core.restore_slack_unit(*warm);
      const auto stores = options.include_store_data ? std::span<const isa::RetiredOp>(fr.stream) : std::span<const isa::RetiredOp>{};
      if (options.truncate_first_round) {
        const std::size_t marker = marker_index(fr.stream, layout.round_end);
        const auto rec = core.run(fr.stream, isa::initial_state(program, inputs), marker + 1);
        traces[idx] = trace_from_record(rec, rec.insts[marker].complete_cycle, stores);
      } else {
        traces[idx] = trace_from_record(core.run(fr.stream, isa::initial_state(program, inputs)), std::nullopt, stores);
      }
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw CollectError(i, errors[i]);
  }

  TraceSet ts = pad_traces(options.kind, traces, plaintexts, keys);
  ts.config_id = options.config_id;
  ts.master_seed = options.master_seed;
  return ts;
}

}  // namespace slacksim::power
