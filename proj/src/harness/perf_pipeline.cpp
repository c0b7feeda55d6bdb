#include "slacksim/harness/perf_pipeline.hpp"

#include <algorithm>
#include <exception>
#include <iomanip>
#include <sstream>

#include "slacksim/harness/core_configs.hpp"
#include "slacksim/harness/csv.hpp"
#include "slacksim/ooo/core.hpp"
#include "slacksim/power/collect.hpp"

namespace slacksim::harness {

namespace {

PerfRow measure(const CoreConfig& core, std::size_t n, std::uint64_t seed, const isa::Program& program) {
  const auto layout = power::AesLayout::of(program);
  power::CollectOptions opt;
  opt.master_seed = seed;
  ooo::Core sim(core.pipeline, core.mode, Prng::derive(seed, ~std::uint64_t{0}));

  PerfRow row;
  row.core = core.name;
  double ipc_sum = 0.0;
  std::optional<std::size_t> last_unstable;
  slack::SlackUnitStats half{};
  for (std::size_t i = 0; i < n; ++i) {
    if (i == n / 2 && sim.slack_unit()) half = sim.slack_unit()->stats();
    const auto in = power::derive_trace_inputs(opt, i);
    const auto inputs = power::aes_inputs(layout, in.key, in.plaintext);
    const auto fr = isa::run_functional(program, inputs, ooo::kDefaultMaxSteps);
    const auto before = sim.slack_unit() ? sim.slack_unit()->stats().unstable_injections : 0;
    const auto rec = sim.run(fr.stream, isa::initial_state(program, inputs));
    if (sim.slack_unit() && sim.slack_unit()->stats().unstable_injections != before) last_unstable = i;
    ipc_sum += rec.ipc;
    row.total_cycles += rec.total_cycles;
  }
  row.mean_ipc = ipc_sum / static_cast<double>(n);
  if (const auto* su = sim.slack_unit()) {
    row.unstable_phase_encryptions = last_unstable ? *last_unstable + 1 : 0;
    const auto unstable = su->stats().unstable_injections - half.unstable_injections;
    const auto stable = su->stats().stable_draws - half.stable_draws;
    row.steady_unstable_share = unstable + stable == 0 ? 0.0 : static_cast<double>(unstable) / static_cast<double>(unstable + stable);
  }
  return row;
}

}  // namespace

const PerfRow* PerfReport::find(const std::string& core) const {
  for (const auto& r : rows) {
    if (r.core == core) return &r;
  }
  return nullptr;
}

std::string PerfReport::table() const {
  std::ostringstream os;
  os << "AES-128, " << n_plaintexts << " plaintexts; IPC normalized to ooo-baseline\n";
  os << std::left << std::setw(22) << "core" << std::setw(12) << "mean IPC" << std::setw(12) << "normalized"
     << std::setw(18) << "unstable phase" << "steady unstable share\n";
  for (const auto& r : rows) {
    os << std::setw(22) << r.core << std::fixed << std::setprecision(4) << std::setw(12) << r.mean_ipc << std::setw(12)
       << r.normalized_ipc << std::setw(18)
       << (r.unstable_phase_encryptions ? std::to_string(*r.unstable_phase_encryptions) : "-")
       << (r.steady_unstable_share ? format_double(*r.steady_unstable_share) : "-") << '\n';
  }
  return os.str();
}

std::string PerfReport::csv() const {
  std::ostringstream os;
  os << "core,mean_ipc,normalized_ipc,total_cycles,unstable_phase_encryptions,steady_unstable_share\n";
  for (const auto& r : rows) {
    os << r.core << ',' << format_double(r.mean_ipc) << ',' << format_double(r.normalized_ipc) << ',' << r.total_cycles << ','
       << (r.unstable_phase_encryptions ? std::to_string(*r.unstable_phase_encryptions) : "") << ','
       << (r.steady_unstable_share ? format_double(*r.steady_unstable_share) : "") << '\n';
  }
  return os.str();
}

PerfReport run_perf_pipeline(const std::vector<std::string>& cores, std::size_t n_plaintexts, std::uint64_t seed,
                             const isa::Program& program, const ooo::ConfigBundle& bundle) {
  if (n_plaintexts == 0) throw std::invalid_argument("perf pipeline needs at least one plaintext");
  std::vector<std::string> names = cores;
  const bool has_baseline = std::find(names.begin(), names.end(), "ooo-baseline") != names.end();
  if (!has_baseline) names.push_back("ooo-baseline");
  std::vector<CoreConfig> configs;
  for (const auto& n : names) configs.push_back(core_config(n, bundle));

  std::vector<PerfRow> rows(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(configs.size()); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      rows[idx] = measure(configs[idx], n_plaintexts, seed, program);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double base = 0.0;
  for (const auto& r : rows) {
    if (r.core == "ooo-baseline") base = r.mean_ipc;
  }
  PerfReport report;
  report.n_plaintexts = n_plaintexts;
  for (auto& r : rows) {
    r.normalized_ipc = r.mean_ipc / base;
    if (has_baseline || r.core != "ooo-baseline") report.rows.push_back(r);
  }
  return report;
}

}  // namespace slacksim::harness
