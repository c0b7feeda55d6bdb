#include "slacksim/harness/plan.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slacksim/harness/core_configs.hpp"
#include "slacksim/util/kv_file.hpp"

namespace slacksim::harness {

const char* to_string(Evaluation e) noexcept {
  switch (e) {
    case Evaluation::Basic:
      return "basic";
    case Evaluation::Educated:
      return "educated";
    case Evaluation::Advanced:
      return "advanced";
  }
  return "?";
}

Evaluation parse_evaluation(std::string_view s) {
  if (s == "basic") return Evaluation::Basic;
  if (s == "educated") return Evaluation::Educated;
  if (s == "advanced") return Evaluation::Advanced;
  throw ConfigError("unknown evaluation `" + std::string(s) + "`");
}

std::string default_program_path() { return std::string(SLACKSIM_DATA_DIR) + "/aes128.s"; }

ExperimentPlan::ExperimentPlan() : cores(core_names()), program(default_program_path()) {}

bool ExperimentPlan::wants(Evaluation e) const { return std::find(evaluations.begin(), evaluations.end(), e) != evaluations.end(); }

void ExperimentPlan::validate() const {
  if (cores.empty()) throw ConfigError("plan lists no cores");
  for (const auto& c : cores) core_config(c);
  if (n_subsets == 0) throw ConfigError("n_subsets must be >= 1");
  if (n_attack_traces % n_subsets != 0) throw ConfigError("n_attack_traces must be divisible by n_subsets");
  if (n_attack_traces / n_subsets < 2) throw ConfigError("each attack subset needs at least 2 traces");
  if (evaluations.empty()) throw ConfigError("plan lists no evaluations");
  if (wants(Evaluation::Advanced) && n_profiling_traces < 2) throw ConfigError("advanced evaluation needs profiling traces");
  if (target_byte < 0 || target_byte > 15) throw ConfigError("target_byte must be in 0..15");
  if (wants(Evaluation::Educated) && windows.empty()) throw ConfigError("educated evaluation needs integration windows");
  for (auto w : windows) {
    if (w == 0) throw ConfigError("integration windows must be >= 1");
  }
  if (max_components == 0) throw ConfigError("max_components must be >= 1");
  if (points_per_decade == 0) throw ConfigError("points_per_decade must be >= 1");
  if (!(poi_threshold >= 0.0 && poi_threshold <= 1.0)) throw ConfigError("poi_threshold must be in [0, 1]");
}

ExperimentPlan parse_plan(std::string_view text, const std::string& base_dir) {
  const auto kv = KeyValueFile::parse(text, "<plan>");
  ExperimentPlan p;
  p.cores = kv.get_list("cores", p.cores);
  p.n_attack_traces = kv.get_uint("n_attack_traces", p.n_attack_traces);
  p.n_profiling_traces = kv.get_uint("n_profiling_traces", p.n_profiling_traces);
  p.n_subsets = kv.get_uint("n_subsets", p.n_subsets);
  if (kv.has("evaluations")) {
    p.evaluations.clear();
    for (const auto& e : kv.get_list("evaluations", {})) p.evaluations.push_back(parse_evaluation(e));
  }
  p.seed = kv.get_uint("seed", p.seed);
  p.target_byte = static_cast<int>(kv.get_uint("target_byte", static_cast<std::uint64_t>(p.target_byte)));
  p.truncate_first_round = kv.get_bool("truncate_first_round", p.truncate_first_round);
  p.include_store_data = kv.get_bool("include_store_data", p.include_store_data);
  if (kv.has("windows")) {
    p.windows.clear();
    for (const auto& w : kv.get_list("windows", {})) {
      try {
        p.windows.push_back(std::stoul(w));
      } catch (const std::exception&) {
        throw ConfigError("bad integration window `" + w + "`");
      }
    }
  }
  p.poi_threshold = kv.get_double("poi_threshold", p.poi_threshold);
  p.max_components = kv.get_uint("max_components", p.max_components);
  p.points_per_decade = static_cast<unsigned>(kv.get_uint("points_per_decade", p.points_per_decade));
  p.warmup_encryptions = static_cast<unsigned>(kv.get_uint("warmup_encryptions", p.warmup_encryptions));

  const auto resolve = [&](const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path fp(path);
    return fp.is_absolute() ? path : (std::filesystem::path(base_dir) / fp).lexically_normal().string();
  };
  if (kv.has("program")) p.program = resolve(kv.get_string("program", ""));
  p.pipeline_config = resolve(kv.get_string("pipeline_config", ""));
  p.output_dir = resolve(kv.get_string("output_dir", p.output_dir));

  if (const auto unused = kv.unused_keys(); !unused.empty()) throw ConfigError("unknown plan key `" + unused.front() + "`");
  p.validate();
  return p;
}

ExperimentPlan load_plan(const std::string& path) {
  const auto kv_text = [&] {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open plan file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }();
  return parse_plan(kv_text, std::filesystem::path(path).parent_path().string());
}

}  // namespace slacksim::harness
