#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slacksim/harness/plan.hpp"
#include "slacksim/power/trace.hpp"
#include "slacksim/sca/metrics.hpp"

namespace slacksim::harness {

struct EvalSettings {
  int target_byte = 0;
  std::uint8_t true_key = 0;
  std::size_t n_subsets = 20;
  unsigned points_per_decade = 20;
  std::vector<std::size_t> windows{20, 50, 100, 150, 200};
  double poi_threshold = 0.005;
  std::size_t max_components = 10;

  static EvalSettings from(const ExperimentPlan& plan);
};

struct AttackOutcome {
  Evaluation evaluation = Evaluation::Basic;
  sca::GECurve curve;
  std::optional<std::size_t> traces_to_break;
  /// Winning parameters, e.g. "window=50" or "window=1;components=4".
  std::string setting;
  /// Profiled correlation on the raw traces (advanced only).
  std::vector<double> poi_correlation;
};

/// True if `a` is a stronger attack than `b`: fewer traces to GE < 1, then a
/// lower final GE.
bool stronger(const AttackOutcome& a, const AttackOutcome& b);

AttackOutcome basic_evaluation(const power::TraceSet& attack, const EvalSettings& s);
/// Best over the integration windows.
AttackOutcome educated_evaluation(const power::TraceSet& attack, const EvalSettings& s);
/// Template attack on PCA-reduced points of interest. Takes the best over
/// {no integration} + the integration windows and over 1..max_components
/// components. PCA is fitted to the per-class mean traces at the POIs.
AttackOutcome advanced_evaluation(const power::TraceSet& attack, const power::TraceSet& profiling, const EvalSettings& s);

struct CoreReport {
  std::string core;
  std::size_t trace_length = 0;
  std::vector<AttackOutcome> outcomes;
  std::string error;

  const AttackOutcome* find(Evaluation e) const;
};

struct SecurityReport {
  std::vector<CoreReport> cores;
  std::size_t traces_per_attack = 0;
  std::size_t n_subsets = 0;
  std::size_t n_attack_traces = 0;

  const CoreReport* find(const std::string& core) const;
};

/// Security ratio of `core` over ooo-baseline for one evaluation.
struct Ratio {
  double value = 0.0;
  bool lower_bound = false;  // core unbroken: true ratio is at least `value`
  bool defined = false;
};
Ratio security_ratio(const SecurityReport& report, const std::string& core, Evaluation e);

/// Collects the sets and runs the requested evaluations for each core. A core
/// that fails is recorded with its error and the remaining cores still run.
SecurityReport run_security_pipeline(const ExperimentPlan& plan, std::ostream* progress = nullptr);

/// Per-core GE curves, POI correlations and summary.csv under `dir`.
void write_security_outputs(const SecurityReport& report, const std::string& dir);

std::string summary_csv(const SecurityReport& report);
std::string summary_table(const SecurityReport& report);

}  // namespace slacksim::harness
