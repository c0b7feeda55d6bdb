// Command-line front end: trace collection, attacks, the full evaluation and
// the performance comparison.

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <iostream>

#include "slacksim/harness/core_configs.hpp"
#include "slacksim/harness/csv.hpp"
#include "slacksim/harness/perf_pipeline.hpp"
#include "slacksim/harness/plan.hpp"
#include "slacksim/harness/security_pipeline.hpp"
#include "slacksim/isa/assembler.hpp"
#include "slacksim/power/collect.hpp"
#include "slacksim/power/ptrc.hpp"
#include "slacksim/sca/cpa.hpp"
#include "slacksim/sca/integrate.hpp"
#include "slacksim/sca/pca.hpp"
#include "slacksim/sca/templates.hpp"
#include "slacksim/sca/ttest.hpp"

namespace {

using namespace slacksim;

ooo::ConfigBundle bundle_from(const std::string& path) { return path.empty() ? ooo::ConfigBundle{} : ooo::load_config(path); }

power::Block parse_block(const std::string& hex) {
  if (hex.size() != 32) throw std::invalid_argument("expected 32 hex digits, got `" + hex + "`");
  power::Block b{};
  for (std::size_t i = 0; i < 16; ++i) b[i] = static_cast<std::uint8_t>(std::stoul(hex.substr(2 * i, 2), nullptr, 16));
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slack-based randomized scheduling simulator and side-channel evaluation"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int workers = 0;
  std::string config_path;
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--workers", workers, "Worker threads (default: OpenMP default)");
  app.add_option("--config", config_path, "Pipeline config file (key = value)")->check(CLI::ExistingFile);

  // collect
  auto* collect = app.add_subcommand("collect", "Simulate AES encryptions and record power traces (PTRC)");
  std::string core_name = "ooo-baseline";
  std::string kind = "attack";
  std::size_t n = 1000;
  std::string out_path;
  bool first_round = false;
  bool include_stores = false;
  std::string fixed_pt;
  std::string program_path = harness::default_program_path();
  unsigned warmup = 20;
  collect->add_option("--core", core_name, "Core configuration")->check(CLI::IsMember(harness::core_names()));
  collect->add_option("--kind", kind, "attack (fixed key) or profiling (random keys)")->check(CLI::IsMember({"attack", "profiling"}));
  collect->add_option("-n,--n", n, "Number of traces")->check(CLI::PositiveNumber);
  collect->add_option("-o,--out", out_path, "Output .ptrc file")->required();
  collect->add_flag("--first-round", first_round, "Record only up to the end of the first AES round");
  collect->add_flag("--include-stores", include_stores, "Add the Hamming weight of store data to the power samples");
  collect->add_option("--fixed-plaintext", fixed_pt, "Use this plaintext (32 hex digits) for every trace");
  collect->add_option("--program", program_path, "AES assembly program")->check(CLI::ExistingFile);
  collect->add_option("--warmup", warmup, "Slack Unit training encryptions")->capture_default_str();
  collect->add_option("--seed", seed, "Master seed");

  // attack
  auto* attack = app.add_subcommand("attack", "Attack a trace file and write per-guess scores (guess,score)");
  std::string method = "basic";
  std::string traces_path;
  std::string profiling_path;
  int target_byte = 0;
  std::string scores_out;
  std::size_t window = 50;
  std::size_t components = 4;
  double threshold = sca::kDefaultPoiThreshold;
  std::size_t subsets = 0;
  std::string ge_out;
  attack->add_option("--method", method, "basic | educated | advanced")->check(CLI::IsMember({"basic", "educated", "advanced"}));
  attack->add_option("--traces", traces_path, "Attack set (.ptrc)")->required()->check(CLI::ExistingFile);
  attack->add_option("--profiling", profiling_path, "Profiling set for the advanced method")->check(CLI::ExistingFile);
  attack->add_option("--target-byte", target_byte, "Key byte under attack")->check(CLI::Range(0, 15));
  attack->add_option("-o,--out", scores_out, "Score CSV")->required();
  attack->add_option("--window", window, "Integration window for the educated method")->check(CLI::PositiveNumber);
  attack->add_option("--components", components, "PCA components for the advanced method")->check(CLI::PositiveNumber);
  attack->add_option("--poi-threshold", threshold, "POI correlation threshold");
  attack->add_option("--subsets", subsets, "Also compute a GE curve over this many subsets");
  attack->add_option("--ge-out", ge_out, "GE curve CSV (traces,ge)");
  attack->add_option("--seed", seed, "Master seed");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Run the basic/educated/advanced evaluation described by a plan file");
  std::string plan_path;
  std::string out_dir;
  evaluate->add_option("plan", plan_path, "Plan file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("-o,--out", out_dir, "Output directory (overrides the plan)");
  evaluate->add_option("--seed", seed, "Master seed (overrides the plan)");

  // perf
  auto* perf = app.add_subcommand("perf", "Compare IPC of the core configurations on AES");
  std::vector<std::string> perf_cores = harness::core_names();
  std::size_t n_plaintexts = 2000;
  std::string perf_csv;
  perf->add_option("--cores", perf_cores, "Cores to compare")->delimiter(',')->check(CLI::IsMember(harness::core_names()));
  perf->add_option("-n,--n", n_plaintexts, "Plaintexts per core")->check(CLI::PositiveNumber);
  perf->add_option("--csv", perf_csv, "Also write the table as CSV");
  perf->add_option("--seed", seed, "Master seed");

  // ttest
  auto* ttest = app.add_subcommand("ttest", "Fixed-vs-random Welch t-test (leakage diagnostic only)");
  std::string fixed_path;
  std::string random_path;
  std::string t_out;
  ttest->add_option("--fixed", fixed_path, "Fixed-plaintext set (.ptrc)")->required()->check(CLI::ExistingFile);
  ttest->add_option("--random", random_path, "Random-plaintext set (.ptrc)")->required()->check(CLI::ExistingFile);
  ttest->add_option("-o,--out", t_out, "CSV of (sample_index,t)");
  ttest->add_option("--seed", seed, "Master seed");

  auto* dump = app.add_subcommand("dump-config", "Print the six core configurations");
  dump->add_option("--seed", seed, "Master seed");

  CLI11_PARSE(app, argc, argv);
  if (workers > 0) omp_set_num_threads(workers);

  try {
    const auto bundle = bundle_from(config_path);

    if (*dump) {
      for (const auto& c : harness::all_core_configs(bundle)) std::cout << harness::describe(c) << '\n';
      return 0;
    }

    if (*collect) {
      const auto program = isa::assemble_file(program_path);
      const auto core = harness::core_config(core_name, bundle);
      power::CollectOptions opt;
      opt.kind = kind == "attack" ? power::SetKind::Attack : power::SetKind::Profiling;
      opt.n_traces = n;
      opt.master_seed = seed;
      opt.truncate_first_round = first_round;
      opt.include_store_data = include_stores;
      opt.warmup_encryptions = warmup;
      opt.config_id = core_name;
      if (!fixed_pt.empty()) opt.fixed_plaintext = parse_block(fixed_pt);
      const auto ts = power::collect_set(program, core.pipeline, core.mode, opt);
      power::save_set(ts, out_path);
      std::cout << "wrote " << ts.size() << " traces x " << ts.n_samples() << " samples to " << out_path << '\n';
      return 0;
    }

    if (*attack) {
      const auto ts = power::load_set(traces_path);
      harness::EvalSettings s;
      s.target_byte = target_byte;
      s.true_key = ts.key(0)[static_cast<std::size_t>(target_byte)];
      s.poi_threshold = threshold;
      s.windows = {window};
      s.max_components = components;

      sca::ScoreVector scores;
      std::function<std::vector<sca::ScoreVector>(const power::TraceSet&, std::span<const std::size_t>)> attack_fn;
      power::TraceSet attacked = ts;
      if (method == "basic" || method == "educated") {
        if (method == "educated") attacked = sca::integrate_traces(ts, window);
        scores = sca::cpa_attack(attacked, target_byte);
        attack_fn = [&](const power::TraceSet& sub, std::span<const std::size_t> g) { return sca::cpa_scores_at(sub, target_byte, g); };
      } else {
        if (profiling_path.empty()) throw std::invalid_argument("--method advanced needs --profiling");
        auto prof = power::load_set(profiling_path);
        const std::size_t len = std::max(ts.n_samples(), prof.n_samples());
        attacked = ts.with_length(len);
        prof = prof.with_length(len);
        const auto poi = sca::profiled_poi(prof, target_byte, threshold);
        if (poi.indices.empty()) throw std::runtime_error("no points of interest found");
        const auto rows = sca::poi_matrix(prof, poi);
        const auto labels = sca::profiling_labels(prof, target_byte);
        const auto proj = sca::class_mean_pca(rows, labels, std::min({components, poi.indices.size(), sca::kClasses}));
        auto tpl = std::make_shared<sca::TemplateSet>(sca::template_fit(sca::project_rows(proj, rows), labels));
        scores = sca::template_attack(attacked, *tpl, poi, proj, target_byte);
        attack_fn = [=](const power::TraceSet& sub, std::span<const std::size_t> g) {
          return sca::template_scores_at(sub, *tpl, poi, proj, target_byte, g);
        };
      }
      harness::write_text(scores_out, harness::scores_csv(scores));
      std::cout << "key byte " << target_byte << ": rank of the true key " << sca::key_rank(scores, s.true_key) << '\n';
      if (subsets > 0) {
        const auto curve = sca::ge_curve(attacked, subsets, s.true_key, attack_fn);
        const auto b = sca::traces_to_ge_below_one(curve);
        std::cout << "traces to GE < 1: " << harness::format_count(b, attacked.size() / subsets) << '\n';
        if (!ge_out.empty()) harness::write_text(ge_out, harness::ge_csv(curve));
      }
      return 0;
    }

    if (*evaluate) {
      auto plan = harness::load_plan(plan_path);
      if (evaluate->count("--seed") > 0 || app.count("--seed") > 0) plan.seed = seed;
      if (!out_dir.empty()) plan.output_dir = out_dir;
      const auto report = harness::run_security_pipeline(plan, &std::cerr);
      harness::write_security_outputs(report, plan.output_dir);
      std::cout << harness::summary_table(report);
      std::cout << "CSV written to " << plan.output_dir << '\n';
      bool failed = false;
      for (const auto& c : report.cores) failed = failed || !c.error.empty();
      return failed ? 2 : 0;
    }

    if (*perf) {
      const auto program = isa::assemble_file(harness::default_program_path());
      const auto report = harness::run_perf_pipeline(perf_cores, n_plaintexts, seed, program, bundle);
      std::cout << report.table();
      if (!perf_csv.empty()) harness::write_text(perf_csv, report.csv());
      return 0;
    }

    if (*ttest) {
      const auto fixed = power::load_set(fixed_path);
      auto random = power::load_set(random_path);
      const std::size_t len = std::max(fixed.n_samples(), random.n_samples());
      const auto t = sca::welch_ttest(fixed.with_length(len), random.with_length(len));
      double max_t = 0.0;
      std::size_t above = 0;
      for (double v : t) {
        max_t = std::max(max_t, std::abs(v));
        above += std::abs(v) > 4.5 ? 1 : 0;
      }
      std::cout << "[diagnostic only: detects first-order leakage, not a security verdict]\n"
                << "max |t| = " << max_t << ", samples above 4.5: " << above << " of " << t.size() << '\n';
      if (!t_out.empty()) {
        std::string csv = "sample_index,t\n";
        for (std::size_t i = 0; i < t.size(); ++i) csv += std::to_string(i) + "," + harness::format_double(t[i]) + "\n";
        harness::write_text(t_out, csv);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
