#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace slacksim::harness {

enum class Evaluation { Basic, Educated, Advanced };

const char* to_string(Evaluation e) noexcept;
Evaluation parse_evaluation(std::string_view s);

/// Everything `evaluate` needs. Defaults are the desk-scale experiment.
struct ExperimentPlan {
  std::vector<std::string> cores;  // default: all six
  std::size_t n_attack_traces = 50'000;
  std::size_t n_profiling_traces = 50'000;
  std::size_t n_subsets = 20;
  std::vector<Evaluation> evaluations{Evaluation::Basic, Evaluation::Educated, Evaluation::Advanced};
  std::uint64_t seed = 1;
  int target_byte = 0;
  bool truncate_first_round = true;
  bool include_store_data = false;
  std::vector<std::size_t> windows{20, 50, 100, 150, 200};
  double poi_threshold = 0.005;
  std::size_t max_components = 10;
  unsigned points_per_decade = 20;
  unsigned warmup_encryptions = 20;
  std::string program;          // AES assembly; default: bundled fixture
  std::string pipeline_config;  // optional key=value pipeline file
  std::string output_dir = "results";

  ExperimentPlan();
  void validate() const;
  bool wants(Evaluation e) const;
};

/// Relative paths in the plan are resolved against `base_dir`.
ExperimentPlan parse_plan(std::string_view text, const std::string& base_dir = ".");
ExperimentPlan load_plan(const std::string& path);

std::string default_program_path();

}  // namespace slacksim::harness
