#include "slacksim/harness/security_pipeline.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "slacksim/harness/core_configs.hpp"
#include "slacksim/harness/csv.hpp"
#include "slacksim/isa/assembler.hpp"
#include "slacksim/power/collect.hpp"
#include "slacksim/sca/cpa.hpp"
#include "slacksim/sca/integrate.hpp"
#include "slacksim/sca/pca.hpp"
#include "slacksim/sca/poi.hpp"
#include "slacksim/sca/templates.hpp"

namespace slacksim::harness {

namespace {

constexpr std::uint64_t kAttackStream = 0;
constexpr std::uint64_t kProfilingStream = 1;

std::size_t as_count(const std::optional<std::size_t>& n) { return n.value_or(std::numeric_limits<std::size_t>::max()); }

AttackOutcome make_outcome(Evaluation e, sca::GECurve curve, std::string setting) {
  AttackOutcome o;
  o.evaluation = e;
  o.traces_to_break = sca::traces_to_ge_below_one(curve);
  o.curve = std::move(curve);
  o.setting = std::move(setting);
  return o;
}

}  // namespace

EvalSettings EvalSettings::from(const ExperimentPlan& plan) {
  EvalSettings s;
  s.target_byte = plan.target_byte;
  s.true_key = power::kDefaultAttackKey[static_cast<std::size_t>(plan.target_byte)];
  s.n_subsets = plan.n_subsets;
  s.points_per_decade = plan.points_per_decade;
  s.windows = plan.windows;
  s.poi_threshold = plan.poi_threshold;
  s.max_components = plan.max_components;
  return s;
}

bool stronger(const AttackOutcome& a, const AttackOutcome& b) {
  if (as_count(a.traces_to_break) != as_count(b.traces_to_break)) return as_count(a.traces_to_break) < as_count(b.traces_to_break);
  return a.curve.ge.back() < b.curve.ge.back();
}

AttackOutcome basic_evaluation(const power::TraceSet& attack, const EvalSettings& s) {
  const auto cpa = [&](const power::TraceSet& subset, std::span<const std::size_t> grid) {
    return sca::cpa_scores_at(subset, s.target_byte, grid);
  };
  return make_outcome(Evaluation::Basic, sca::ge_curve(attack, s.n_subsets, s.true_key, cpa, s.points_per_decade), "-");
}

AttackOutcome educated_evaluation(const power::TraceSet& attack, const EvalSettings& s) {
  std::optional<AttackOutcome> best;
  for (std::size_t w : s.windows) {
    const auto integrated = sca::integrate_traces(attack, w);
    auto o = basic_evaluation(integrated, s);
    o.evaluation = Evaluation::Educated;
    o.setting = "window=" + std::to_string(w);
    if (!best || stronger(o, *best)) best = std::move(o);
  }
  if (!best) throw std::invalid_argument("educated evaluation needs at least one window");
  return *best;
}

AttackOutcome advanced_evaluation(const power::TraceSet& attack, const power::TraceSet& profiling, const EvalSettings& s) {
  const std::size_t len = std::max(attack.n_samples(), profiling.n_samples());
  const auto atk = attack.n_samples() == len ? attack : attack.with_length(len);
  const auto prof = profiling.n_samples() == len ? profiling : profiling.with_length(len);
  const auto labels = sca::profiling_labels(prof, s.target_byte);

  std::vector<std::size_t> windows{1};
  for (std::size_t w : s.windows) {
    if (w > 1) windows.push_back(w);
  }

  std::optional<AttackOutcome> best;
  std::vector<double> raw_correlation;
  for (std::size_t w : windows) {
    const auto a = w == 1 ? atk : sca::integrate_traces(atk, w);
    const auto p = w == 1 ? prof : sca::integrate_traces(prof, w);
    auto corr = sca::profiled_correlation(p, s.target_byte);
    const auto poi = sca::select_poi(corr, s.poi_threshold);
    if (w == 1) raw_correlation = corr;
    if (poi.indices.empty()) continue;

    const Eigen::MatrixXd rows = sca::poi_matrix(p, poi);
    const std::size_t want = std::min({s.max_components, poi.indices.size(), sca::kClasses});
    const auto full = sca::class_mean_pca(rows, labels, want);
    for (std::size_t c = 1; c <= full.n_components(); ++c) {
      const auto proj = sca::pca_truncate(full, c);
      sca::TemplateSet tpl;
      try {
        tpl = sca::template_fit(sca::project_rows(proj, rows), labels);
      } catch (const sca::TemplateError&) {
        continue;
      }
      const auto attack_fn = [&](const power::TraceSet& subset, std::span<const std::size_t> grid) {
        return sca::template_scores_at(subset, tpl, poi, proj, s.target_byte, grid);
      };
      auto o = make_outcome(Evaluation::Advanced, sca::ge_curve(a, s.n_subsets, s.true_key, attack_fn, s.points_per_decade),
                            "window=" + std::to_string(w) + ";components=" + std::to_string(c));
      if (!best || stronger(o, *best)) best = std::move(o);
    }
  }
  if (!best) throw std::runtime_error(
        "advanced evaluation could not fit any template: no points of interest, or too few profiling traces in some "
        "Hamming-weight class");
  best->poi_correlation = std::move(raw_correlation);
  return *best;
}

const AttackOutcome* CoreReport::find(Evaluation e) const {
  for (const auto& o : outcomes) {
    if (o.evaluation == e) return &o;
  }
  return nullptr;
}

const CoreReport* SecurityReport::find(const std::string& core) const {
  for (const auto& c : cores) {
    if (c.core == core) return &c;
  }
  return nullptr;
}

Ratio security_ratio(const SecurityReport& report, const std::string& core, Evaluation e) {
  Ratio r;
  const auto* base = report.find("ooo-baseline");
  const auto* mine = report.find(core);
  if (!base || !mine) return r;
  const auto* bo = base->find(e);
  const auto* mo = mine->find(e);
  if (!bo || !mo || !bo->traces_to_break) return r;
  r.defined = true;
  const double b = static_cast<double>(*bo->traces_to_break);
  if (mo->traces_to_break) {
    r.value = static_cast<double>(*mo->traces_to_break) / b;
  } else {
    r.value = static_cast<double>(report.traces_per_attack) / b;
    r.lower_bound = true;
  }
  return r;
}

SecurityReport run_security_pipeline(const ExperimentPlan& plan, std::ostream* progress) {
  plan.validate();
  const auto program = isa::assemble_file(plan.program);
  const auto bundle = plan.pipeline_config.empty() ? ooo::ConfigBundle{} : ooo::load_config(plan.pipeline_config);
  const auto settings = EvalSettings::from(plan);

  SecurityReport report;
  report.n_subsets = plan.n_subsets;
  report.n_attack_traces = plan.n_attack_traces;
  report.traces_per_attack = plan.n_attack_traces / plan.n_subsets;

  for (const auto& name : plan.cores) {
    CoreReport cr;
    cr.core = name;
    try {
      const auto core = core_config(name, bundle);
      power::CollectOptions opt;
      opt.kind = power::SetKind::Attack;
      opt.n_traces = plan.n_attack_traces;
      opt.master_seed = Prng::derive(plan.seed, kAttackStream);
      opt.truncate_first_round = plan.truncate_first_round;
      opt.include_store_data = plan.include_store_data;
      opt.warmup_encryptions = plan.warmup_encryptions;
      opt.config_id = name;
      if (progress) *progress << "[" << name << "] collecting " << opt.n_traces << " attack traces" << std::endl;
      const auto attack = power::collect_set(program, core.pipeline, core.mode, opt);
      cr.trace_length = attack.n_samples();

      if (plan.wants(Evaluation::Basic)) {
        if (progress) *progress << "[" << name << "] basic CPA" << std::endl;
        cr.outcomes.push_back(basic_evaluation(attack, settings));
      }
      if (plan.wants(Evaluation::Educated)) {
        if (progress) *progress << "[" << name << "] educated CPA" << std::endl;
        cr.outcomes.push_back(educated_evaluation(attack, settings));
      }
      if (plan.wants(Evaluation::Advanced)) {
        opt.kind = power::SetKind::Profiling;
        opt.n_traces = plan.n_profiling_traces;
        opt.master_seed = Prng::derive(plan.seed, kProfilingStream);
        if (progress) *progress << "[" << name << "] collecting " << opt.n_traces << " profiling traces" << std::endl;
        const auto profiling = power::collect_set(program, core.pipeline, core.mode, opt);
        if (progress) *progress << "[" << name << "] template attack" << std::endl;
        cr.outcomes.push_back(advanced_evaluation(attack, profiling, settings));
      }
    } catch (const std::exception& e) {
      cr.error = e.what();
      if (progress) *progress << "[" << name << "] failed: " << e.what() << std::endl;
    }
    report.cores.push_back(std::move(cr));
  }
  return report;
}

std::string summary_csv(const SecurityReport& report) {
  std::ostringstream os;
  os << "core,evaluation,traces_to_ge_below_1,ratio_vs_ooo_baseline,setting,final_ge\n";
  for (const auto& c : report.cores) {
    if (!c.error.empty()) {
      os << c.core << ",error,,,," << '\n';
      continue;
    }
    for (const auto& o : c.outcomes) {
      const auto r = security_ratio(report, c.core, o.evaluation);
      os << c.core << ',' << to_string(o.evaluation) << ',' << format_count(o.traces_to_break, report.traces_per_attack) << ',';
      if (r.defined) os << (r.lower_bound ? ">" : "") << format_double(r.value);
      os << ',' << o.setting << ',' << format_double(o.curve.ge.back()) << '\n';
    }
  }
  return os.str();
}

std::string summary_table(const SecurityReport& report) {
  std::ostringstream os;
  os << "traces to GE < 1 (" << report.n_subsets << " attacks of up to " << report.traces_per_attack
     << " traces each; ratios against ooo-baseline under the same evaluation)\n";
  os << std::left << std::setw(22) << "core";
  for (Evaluation e : {Evaluation::Basic, Evaluation::Educated, Evaluation::Advanced}) os << std::setw(24) << to_string(e);
  os << '\n';
  for (const auto& c : report.cores) {
    os << std::setw(22) << c.core;
    if (!c.error.empty()) {
      os << "error: " << c.error << '\n';
      continue;
    }
    for (Evaluation e : {Evaluation::Basic, Evaluation::Educated, Evaluation::Advanced}) {
      const auto* o = c.find(e);
      std::string cell = "-";
      if (o) {
        cell = format_count(o->traces_to_break, report.traces_per_attack);
        const auto r = security_ratio(report, c.core, e);
        if (r.defined && c.core != "ooo-baseline") {
          std::ostringstream rs;
          rs << std::fixed << std::setprecision(1) << r.value;
          cell += " (" + std::string(r.lower_bound ? ">" : "") + rs.str() + "x)";
        }
      }
      os << std::setw(24) << cell;
    }
    os << '\n';
  }
  return os.str();
}

void write_security_outputs(const SecurityReport& report, const std::string& dir) {
  for (const auto& c : report.cores) {
    for (const auto& o : c.outcomes) {
      write_text(dir + "/" + c.core + "_" + to_string(o.evaluation) + "_ge.csv", ge_csv(o.curve));
      if (!o.poi_correlation.empty()) write_text(dir + "/" + c.core + "_poi.csv", correlation_csv(o.poi_correlation));
    }
  }
  write_text(dir + "/summary.csv", summary_csv(report));
}

}  // namespace slacksim::harness
