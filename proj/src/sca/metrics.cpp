#include "slacksim/sca/metrics.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

namespace slacksim::sca {

int key_rank(const ScoreVector& p, std::uint8_t true_key) {
  const double ref = p.scores[true_key];
  int rank = 0;
  for (double s : p.scores) rank += s > ref ? 1 : 0;
  return rank;
}

double guessing_entropy(std::span<const ScoreVector> attacks, std::uint8_t true_key) {
  if (attacks.empty()) throw std::invalid_argument("guessing entropy of an empty attack list");
  double sum = 0.0;
  for (const auto& a : attacks) sum += key_rank(a, true_key);
  return sum / static_cast<double>(attacks.size());
}

std::vector<std::size_t> log_grid(std::size_t max_traces, unsigned points_per_decade) {
  if (max_traces < 2) throw std::invalid_argument("trace-count grid needs at least 2 traces");
  if (points_per_decade == 0) throw std::invalid_argument("points_per_decade must be >= 1");
  std::vector<std::size_t> grid;
  const double step = std::pow(10.0, 1.0 / points_per_decade);
  for (double v = 2.0; v < static_cast<double>(max_traces); v *= step) {
    const auto n = static_cast<std::size_t>(std::llround(v));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.empty() || grid.back() != max_traces) grid.push_back(max_traces);
  return grid;
}

GECurve ge_curve(const power::TraceSet& set, std::size_t n_subsets, std::uint8_t true_key, const SubsetAttack& attack,
                 unsigned points_per_decade) {
  if (n_subsets == 0) throw std::invalid_argument("n_subsets must be >= 1");
  const std::size_t per = set.size() / n_subsets;
  if (per < 2) throw std::invalid_argument("each subset needs at least 2 traces");

  GECurve curve;
  curve.traces = log_grid(per, points_per_decade);
  curve.n_attacks = n_subsets;
  std::vector<std::vector<int>> ranks(n_subsets);
  std::vector<std::exception_ptr> errors(n_subsets);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(n_subsets); ++a) {
    const auto ai = static_cast<std::size_t>(a);
    try {
      const auto subset = set.slice(ai * per, per);
      const auto scores = attack(subset, curve.traces);
      for (const auto& sv : scores) ranks[ai].push_back(key_rank(sv, true_key));
    } catch (...) {
      errors[ai] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  curve.ge.assign(curve.traces.size(), 0.0);
  for (std::size_t j = 0; j < curve.traces.size(); ++j) {
    double sum = 0.0;
    for (const auto& r : ranks) sum += r[j];
    curve.ge[j] = sum / static_cast<double>(n_subsets);
  }
  return curve;
}

std::optional<std::size_t> traces_to_ge_below_one(const GECurve& curve) {
  std::optional<std::size_t> first;
  for (std::size_t j = 0; j < curve.traces.size(); ++j) {
    if (curve.ge[j] < 1.0) {
      if (!first) first = curve.traces[j];
    } else {
      first.reset();
    }
  }
  return first;
}

}  // namespace slacksim::sca
