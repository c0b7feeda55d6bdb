#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "slacksim/sca/aes_model.hpp"
#include "slacksim/sca/cpa.hpp"
#include "slacksim/sca/integrate.hpp"
#include "slacksim/sca/kernels.hpp"
#include "slacksim/sca/metrics.hpp"
#include "slacksim/sca/pca.hpp"
#include "slacksim/sca/poi.hpp"
#include "slacksim/sca/templates.hpp"
#include "slacksim/sca/ttest.hpp"
#include "support/aes_oracle.hpp"
#include "support/synthetic.hpp"

using namespace slacksim;
using testgen::hw;
using testgen::synthetic;

namespace {

sca::ScoreVector scores_with_rank(std::uint8_t true_key, int rank) {
  sca::ScoreVector v;
  for (std::size_t k = 0; k < 256; ++k) v.scores[k] = 0.0;
  v.scores[true_key] = 0.5;
  for (int r = 0, k = 0; r < rank; ++k) {
    if (k == true_key) continue;
    v.scores[static_cast<std::size_t>(k)] = 1.0;
    ++r;
  }
  return v;
}

}  // namespace

TEST_CASE("hypothesis table") {
  const auto& t = sca::hypothesis_table();
  for (int k = 0; k < 256; k += 17) {
    for (int p = 0; p < 256; p += 13) {
      CHECK(t[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] == hw(oracle::sbox()[static_cast<std::size_t>(p ^ k)]));
    }
  }
}

TEST_CASE("correlation kernels agree with a direct Pearson on small instances") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const auto ts = synthetic(8, 4, 1, 0x3c, 3.0, seed);
    const auto ref = sca::reference::correlate(ts, 0);
    sca::CpaAccumulator acc(ts.n_samples());
    acc.add_range(ts, 0, 0, ts.size());
    const auto fast = acc.correlations();
    for (unsigned k = 0; k < 256; ++k) {
      for (std::size_t s = 0; s < ts.n_samples(); ++s) {
        const double r = testgen::brute_force_cpa(ts, k, s);
        CHECK(std::abs(ref.at(k, s) - r) <= 1e-12);
        CHECK(std::abs(fast.at(k, s) - r) <= 1e-12);
      }
    }
  }
}

TEST_CASE("accumulator is independent of how traces are added") {
  const auto ts = synthetic(300, 16, 5, 0x11, 2.0, 4);
  sca::CpaAccumulator whole(16), pieces(16);
  whole.add_range(ts, 0, 0, 300);
  pieces.add_range(ts, 0, 0, 17);
  for (std::size_t i = 17; i < 200; ++i) pieces.add(ts.trace(i), ts.plaintext(i)[0]);
  pieces.add_range(ts, 0, 200, 100);
  CHECK(whole.count() == 300);
  CHECK(whole.correlations().r == pieces.correlations().r);
}

TEST_CASE("noiseless CPA ranks the true key first") {
  const auto ts = synthetic(200, 8, 3, 0xa7, 0.0, 2);
  const auto sv = sca::cpa_attack(ts, 0);
  CHECK(sca::key_rank(sv, 0xa7) == 0);
  CHECK(sv.scores[0xa7] == doctest::Approx(1.0));
  CHECK_THROWS_AS(sca::cpa_attack(ts.slice(0, 1), 0), std::invalid_argument);
}

TEST_CASE("constant hypothesis columns are flagged degenerate") {
  auto ts = synthetic(10, 4, 0, 0x00, 1.0, 3);
  for (std::size_t i = 0; i < ts.size(); ++i) ts.plaintext(i)[0] = 0x42;
  const auto sv = sca::cpa_attack(ts, 0);
  CHECK(sv.any_degenerate());
  CHECK(sv.scores[0] == 0.0);
}

TEST_CASE("CPA scores on a grid match separate attacks") {
  const auto ts = synthetic(120, 6, 2, 0x5a, 2.0, 8);
  const std::vector<std::size_t> grid{2, 10, 50, 120};
  const auto at = sca::cpa_scores_at(ts, 0, grid);
  REQUIRE(at.size() == grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto direct = sca::cpa_attack(ts.slice(0, grid[j]), 0);
    for (std::size_t k = 0; k < 256; ++k) CHECK(at[j].scores[k] == doctest::Approx(direct.scores[k]).epsilon(1e-12));
  }
}

TEST_CASE("key rank and guessing entropy") {
  CHECK(sca::key_rank(scores_with_rank(9, 0), 9) == 0);
  CHECK(sca::key_rank(scores_with_rank(9, 5), 9) == 5);
  // Ties do not count against the true key.
  sca::ScoreVector tie;
  tie.scores.fill(1.0);
  CHECK(sca::key_rank(tie, 3) == 0);

  const std::vector<sca::ScoreVector> attacks{scores_with_rank(9, 0), scores_with_rank(9, 3), scores_with_rank(9, 8),
                                              scores_with_rank(9, 1)};
  CHECK(sca::guessing_entropy(attacks, 9) == doctest::Approx((0 + 3 + 8 + 1) / 4.0));
  CHECK_THROWS(sca::guessing_entropy(std::span<const sca::ScoreVector>{}, 9));
}

TEST_CASE("guessing entropy without leakage is near the middle") {
  const auto ts = synthetic(200 * 40, 4, 1000, 0x77, 3.0, 10);  // leak position outside the trace
  const auto curve = sca::ge_curve(ts, 200, 0x77, [](const power::TraceSet& sub, std::span<const std::size_t> grid) {
    return sca::cpa_scores_at(sub, 0, grid);
  });
  CHECK(curve.n_attacks == 200);
  CHECK(curve.ge.back() == doctest::Approx(127.5).epsilon(25.0 / 127.5));
  CHECK_FALSE(sca::traces_to_ge_below_one(curve));
}

TEST_CASE("GE curve recovers a leaking key") {
  const auto ts = synthetic(4000, 8, 4, 0x2b, 1.0, 12);
  const auto curve = sca::ge_curve(ts, 10, 0x2b, [](const power::TraceSet& sub, std::span<const std::size_t> grid) {
    return sca::cpa_scores_at(sub, 0, grid);
  });
  const auto n = sca::traces_to_ge_below_one(curve);
  REQUIRE(n);
  CHECK(*n < 400);
  for (std::size_t j = 0; j < curve.traces.size(); ++j) {
    if (curve.traces[j] >= *n) CHECK(curve.ge[j] < 1.0);
  }
}

TEST_CASE("log grid") {
  const auto g = sca::log_grid(2500, 20);
  CHECK(g.front() == 2);
  CHECK(g.back() == 2500);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(g.size() > 50);
  CHECK(sca::log_grid(2) == std::vector<std::size_t>{2});
}

TEST_CASE("first GE point below one after which it stays below one") {
  sca::GECurve c;
  c.traces = {2, 4, 8, 16, 32};
  c.ge = {5.0, 0.5, 2.0, 0.9, 0.0};
  CHECK(sca::traces_to_ge_below_one(c) == std::size_t{16});
  c.ge = {5.0, 0.5, 0.2, 0.9, 1.0};
  CHECK_FALSE(sca::traces_to_ge_below_one(c));
}

TEST_CASE("integration preserves sums") {
  const auto ts = synthetic(20, 23, 3, 0x01, 4.0, 5);
  for (std::size_t w : {1, 5, 20, 23, 50}) {
    const auto it = sca::integrate_traces(ts, w);
    CHECK(it.n_samples() == (23 + w - 1) / w);
    CHECK(it.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto a = ts.trace(i), b = it.trace(i);
      CHECK(std::accumulate(a.begin(), a.end(), 0ULL) == std::accumulate(b.begin(), b.end(), 0ULL));
      CHECK(it.plaintext(i) == ts.plaintext(i));
    }
  }
  const auto w5 = sca::integrate_traces(ts, 5);
  CHECK(w5.trace(0)[4] == ts.trace(0)[20] + ts.trace(0)[21] + ts.trace(0)[22]);
  CHECK_THROWS(sca::integrate_traces(ts, 0));
}

TEST_CASE("points of interest") {
  SUBCASE("threshold selection") {
    const std::vector<double> r{0.001, 0.2, -0.3, 0.004, 0.05};
    const auto poi = sca::select_poi(r, 0.005);
    CHECK(poi.indices == std::vector<std::size_t>{1, 2, 4});
    CHECK_FALSE(poi.region_fallback);
  }
  SUBCASE("empty selection falls back to the peak region") {
    const std::vector<double> r{0.0, 0.001, 0.003, 0.002, 0.0};
    const auto poi = sca::select_poi(r, 0.005);
    CHECK(poi.region_fallback);
    CHECK_FALSE(poi.indices.empty());
    CHECK(std::find(poi.indices.begin(), poi.indices.end(), 2) != poi.indices.end());
  }
  SUBCASE("profiled correlation peaks at the leaking sample") {
    const auto prof = synthetic(3000, 12, 7, 0, 1.0, 6, true);
    const auto r = sca::profiled_correlation(prof, 0);
    CHECK(std::max_element(r.begin(), r.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }) - r.begin() == 7);
    const auto poi = sca::profiled_poi(prof, 0, 0.2);
    CHECK(poi.indices == std::vector<std::size_t>{7});
  }
}

TEST_CASE("PCA produces an orthonormal basis ordered by variance") {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd rows(500, 6);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double a = 5 * n01(gen), b = 2 * n01(gen);
    for (Eigen::Index j = 0; j < 6; ++j) rows(i, j) = a * (j + 1) + b * (j % 2 ? 1 : -1) + 0.1 * n01(gen);
  }
  const auto proj = sca::pca_fit(rows, 4);
  REQUIRE(proj.n_components() == 4);
  const Eigen::MatrixXd gram = proj.components * proj.components.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
  for (Eigen::Index i = 1; i < proj.explained.size(); ++i) CHECK(proj.explained(i) <= proj.explained(i - 1));
  CHECK(proj.explained(0) > 100 * proj.explained(2));

  const auto t = sca::pca_truncate(proj, 2);
  CHECK(t.n_components() == 2);
  const Eigen::VectorXd y = sca::pca_project(t, rows.row(0).transpose());
  CHECK(y(0) == doctest::Approx(proj.components.row(0).dot(rows.row(0).transpose() - proj.mean)));

  Eigen::MatrixXd flat = Eigen::MatrixXd::Ones(10, 3);
  flat.col(0) = Eigen::VectorXd::LinSpaced(10, 0, 9);
  const auto deficient = sca::pca_fit(flat, 3);
  CHECK(deficient.rank_deficient);
  CHECK(deficient.n_components() == 1);
}

TEST_CASE("profiling labels follow the binomial class distribution") {
  const auto prof = synthetic(25600, 1, 0, 0, 1.0, 7, true);
  const auto labels = sca::profiling_labels(prof, 0);
  std::array<double, sca::kClasses> counts{};
  for (int l : labels) counts[static_cast<std::size_t>(l)] += 1.0;
  const double binom[] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
  for (std::size_t c = 0; c < sca::kClasses; ++c) {
    const double expected = 25600.0 * binom[c] / 256.0;
    CHECK(std::abs(counts[c] - expected) <= 5 * std::sqrt(expected) + 2);
  }
}

TEST_CASE("template attack is self-consistent on synthetic leakage") {
  const auto prof = synthetic(20000, 10, 4, 0, 1.0, 21, true);
  const auto attack = synthetic(60, 10, 4, 0xc3, 1.0, 22);
  const auto poi = sca::profiled_poi(prof, 0, 0.05);
  REQUIRE_FALSE(poi.indices.empty());
  const auto proj = sca::pca_fit(sca::poi_matrix(prof, poi), 1);
  const auto t = sca::template_fit(prof, poi, proj, 0);
  CHECK(t.dim() == 1);
  for (std::size_t c = 1; c < sca::kClasses; ++c) CHECK(std::abs(t.means(static_cast<Eigen::Index>(c), 0) - t.means(static_cast<Eigen::Index>(c - 1), 0)) > 0.5);
  const auto sv = sca::template_attack(attack, t, poi, proj, 0);
  CHECK(sca::key_rank(sv, 0xc3) == 0);

  const std::vector<std::size_t> grid{2, 30, 60};
  const auto at = sca::template_scores_at(attack, t, poi, proj, 0, grid);
  CHECK(at.back().scores == sv.scores);
}

TEST_CASE("template fitting rejects thin classes") {
  Eigen::MatrixXd obs(9, 2);
  obs.setRandom();
  std::vector<int> labels{0, 1, 2, 3, 4, 5, 6, 7, 8};
  CHECK_THROWS_AS(sca::template_fit(obs, labels), sca::TemplateError);
}

TEST_CASE("Welch t statistic") {
  power::TraceSet a(power::SetKind::Attack, 4, 2), b(power::SetKind::Attack, 3, 2);
  const double av[] = {1, 2, 3, 4}, bv[] = {6, 8, 10};
  for (std::size_t i = 0; i < 4; ++i) {
    a.trace(i)[0] = static_cast<std::uint32_t>(av[i]);
    a.trace(i)[1] = 5;
  }
  for (std::size_t i = 0; i < 3; ++i) {
    b.trace(i)[0] = static_cast<std::uint32_t>(bv[i]);
    b.trace(i)[1] = 5;
  }
  // means 2.5 / 8, variances 5/3 / 4
  const double expected = (2.5 - 8.0) / std::sqrt((5.0 / 3.0) / 4 + 4.0 / 3);
  const auto t = sca::welch_ttest(a, b);
  CHECK(t[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(t[1] == 0.0);
  CHECK_THROWS_AS(sca::welch_ttest(a.slice(0, 1), b), std::invalid_argument);
  CHECK_THROWS_AS(sca::welch_ttest(a, b.with_length(3)), std::invalid_argument);
}
