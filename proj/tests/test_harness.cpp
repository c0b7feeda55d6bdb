#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "slacksim/harness/core_configs.hpp"
#include "slacksim/harness/csv.hpp"
#include "slacksim/harness/perf_pipeline.hpp"
#include "slacksim/harness/plan.hpp"
#include "slacksim/harness/security_pipeline.hpp"
#include "slacksim/isa/assembler.hpp"
#include "slacksim/util/kv_file.hpp"

using namespace slacksim;
using harness::Evaluation;

TEST_CASE("core configurations") {
  CHECK(harness::core_names() == std::vector<std::string>{"ooo-baseline", "io-baseline", "paradise", "random-iso-perf",
                                                          "random-iso-security", "random-aggressive"});
  CHECK(std::holds_alternative<ooo::OutOfOrder>(harness::core_config("ooo-baseline").mode));
  CHECK(std::holds_alternative<ooo::InOrder>(harness::core_config("io-baseline").mode));
  const auto par = std::get<ooo::SlackScheduled>(harness::core_config("paradise").mode);
  CHECK(par.slack.ways == 4);
  CHECK(par.slack.sets == 16);
  const auto perf = std::get<ooo::RandomDelay>(harness::core_config("random-iso-perf").mode);
  const auto sec = std::get<ooo::RandomDelay>(harness::core_config("random-iso-security").mode);
  const auto agg = std::get<ooo::RandomDelay>(harness::core_config("random-aggressive").mode);
  CHECK(perf.probability == 0.05);
  CHECK(sec.probability == 0.20);
  CHECK(agg.probability == 1.0);
  CHECK(perf.max_delay == 8);
  CHECK(agg.max_delay == 8);
  for (const auto& c : harness::all_core_configs()) CHECK(c.pipeline == ooo::PipelineConfig{});
  CHECK_THROWS_AS(harness::core_config("turbo"), ConfigError);
  CHECK(harness::describe(harness::core_config("paradise")).find("slack") != std::string::npos);
}

TEST_CASE("experiment plans") {
  const harness::ExperimentPlan def;
  CHECK(def.cores.size() == 6);
  CHECK(def.n_attack_traces == 50000);
  CHECK(def.n_subsets == 20);
  CHECK(def.windows == std::vector<std::size_t>{20, 50, 100, 150, 200});
  CHECK(def.poi_threshold == 0.005);

  const auto p = harness::parse_plan(
      "cores = paradise, ooo-baseline\nevaluations = basic\nn_attack_traces = 100\nn_subsets = 4\n"
      "windows = 3, 7\noutput_dir = out\n",
      "/base");
  CHECK(p.cores == std::vector<std::string>{"paradise", "ooo-baseline"});
  CHECK(p.wants(Evaluation::Basic));
  CHECK_FALSE(p.wants(Evaluation::Advanced));
  CHECK(p.windows == std::vector<std::size_t>{3, 7});
  CHECK(p.output_dir == "/base/out");

  CHECK_THROWS(harness::parse_plan("n_attack_traces = 101\nn_subsets = 4\n"));
  CHECK_THROWS(harness::parse_plan("n_subsets = 0\n"));
  CHECK_THROWS(harness::parse_plan("cores = nope\n"));
  CHECK_THROWS(harness::parse_plan("evaluations = psychic\n"));
  CHECK_THROWS(harness::parse_plan("colour = blue\n"));
  CHECK(harness::parse_evaluation("educated") == Evaluation::Educated);
  CHECK(std::string(harness::to_string(Evaluation::Advanced)) == "advanced");
}

TEST_CASE("csv formatting") {
  CHECK(harness::format_double(0.1) == "0.1");
  CHECK(harness::format_double(2.0) == "2");
  CHECK(harness::format_count(std::size_t{12}, 100) == "12");
  CHECK(harness::format_count(std::nullopt, 100) == ">100");
  sca::GECurve c;
  c.traces = {2, 3};
  c.ge = {10.5, 0};
  CHECK(harness::ge_csv(c) == "traces,ge\n2,10.5\n3,0\n");
}

TEST_CASE("a small security run is complete and reproducible") {
  harness::ExperimentPlan plan;
  plan.cores = {"ooo-baseline", "io-baseline"};
  plan.n_attack_traces = 400;
  plan.n_profiling_traces = 4000;
  plan.n_subsets = 2;
  plan.windows = {20};
  plan.max_components = 3;
  const auto a = harness::run_security_pipeline(plan);
  const auto b = harness::run_security_pipeline(plan);
  REQUIRE(a.cores.size() == 2);
  CHECK(a.traces_per_attack == 200);
  for (const auto& core : a.cores) {
    CHECK_MESSAGE(core.error.empty(), core.error);
    CHECK(core.outcomes.size() == 3);
    CHECK(core.trace_length > 0);
  }
  CHECK(harness::summary_csv(a) == harness::summary_csv(b));
  const auto r = harness::security_ratio(a, "ooo-baseline", Evaluation::Basic);
  if (r.defined) CHECK(r.value == 1.0);

  const auto dir = std::filesystem::temp_directory_path() / "slacksim_harness_test";
  std::filesystem::remove_all(dir);
  harness::write_security_outputs(a, dir.string());
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "ooo-baseline_basic_ge.csv"));
  CHECK(std::filesystem::exists(dir / "io-baseline_poi.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("perf pipeline normalizes against the out-of-order baseline") {
  const auto prog = isa::assemble_file(harness::default_program_path());
  const auto rep = harness::run_perf_pipeline({"ooo-baseline", "io-baseline", "paradise"}, 20, 1, prog);
  REQUIRE(rep.find("ooo-baseline") != nullptr);
  CHECK(harness::run_perf_pipeline({"io-baseline"}, 2, 1, prog).find("ooo-baseline") == nullptr);
  CHECK(rep.find("ooo-baseline")->normalized_ipc == 1.0);
  CHECK(rep.find("io-baseline")->normalized_ipc < 1.0);
  CHECK(rep.find("paradise")->unstable_phase_encryptions.has_value());
  CHECK_FALSE(rep.find("io-baseline")->unstable_phase_encryptions.has_value());
  CHECK(rep.find("paradise")->steady_unstable_share.has_value());
  CHECK(rep.csv().find("paradise") != std::string::npos);
}
