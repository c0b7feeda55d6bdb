#include "slacksim/sca/templates.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "slacksim/sca/aes_model.hpp"

namespace slacksim::sca {

TemplateSet template_fit(const Eigen::MatrixXd& observations, std::span<const int> labels) {
  const auto n = static_cast<std::size_t>(observations.rows());
  const auto d = static_cast<Eigen::Index>(observations.cols());
  if (labels.size() != n) throw std::invalid_argument("label count does not match observations");

  TemplateSet t;
  t.means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kClasses), d);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = labels[i];
    if (c < 0 || c >= static_cast<int>(kClasses)) throw std::invalid_argument("template class label out of range");
    ++t.counts[static_cast<std::size_t>(c)];
    t.means.row(c) += observations.row(static_cast<Eigen::Index>(i));
  }
  for (std::size_t c = 0; c < kClasses; ++c) {
    if (t.counts[c] < static_cast<std::size_t>(d) + 1) {
      throw TemplateError("class " + std::to_string(c) + " has " + std::to_string(t.counts[c]) +
                          " profiling traces; need at least " + std::to_string(d + 1));
    }
    t.means.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(t.counts[c]);
  }

  Eigen::MatrixXd centred(static_cast<Eigen::Index>(n), d);
  for (std::size_t i = 0; i < n; ++i) {
    centred.row(static_cast<Eigen::Index>(i)) = observations.row(static_cast<Eigen::Index>(i)) - t.means.row(labels[i]);
  }
  t.covariance = (centred.transpose() * centred) / static_cast<double>(n - kClasses);

  // Grow a diagonal ridge until the Cholesky factorisation succeeds.
  const double scale = std::max(t.covariance.diagonal().cwiseAbs().maxCoeff(), 1.0);
  double eps = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (int attempt = 0; attempt < 40; ++attempt) {
    Eigen::MatrixXd reg = t.covariance;
    reg.diagonal().array() += eps;
    llt.compute(reg);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
      t.covariance = reg;
      break;
    }
    eps = eps == 0.0 ? scale * 1e-12 : eps * 10.0;
  }
  if (llt.info() != Eigen::Success) throw TemplateError("pooled covariance could not be regularised");
  t.epsilon = eps;
  t.precision = llt.solve(Eigen::MatrixXd::Identity(d, d));
  t.log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return t;
}

Eigen::MatrixXd project_rows(const PCAProjection& proj, const Eigen::MatrixXd& rows) {
  if (static_cast<std::size_t>(rows.cols()) != proj.n_inputs()) throw std::invalid_argument("PCA input dimension mismatch");
  return (rows.rowwise() - proj.mean.transpose()) * proj.components.transpose();
}

std::vector<int> profiling_labels(const power::TraceSet& profiling, int target_byte) {
  const auto tb = static_cast<std::size_t>(target_byte);
  std::vector<int> labels(profiling.size());
  for (std::size_t i = 0; i < profiling.size(); ++i) labels[i] = sbox_hypothesis(profiling.plaintext(i)[tb], profiling.key(i)[tb]);
  return labels;
}

PCAProjection class_mean_pca(const Eigen::MatrixXd& rows, std::span<const int> labels, std::size_t n_components) {
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kClasses), rows.cols());
  std::array<std::size_t, kClasses> counts{};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    means.row(labels[i]) += rows.row(static_cast<Eigen::Index>(i));
    ++counts[static_cast<std::size_t>(labels[i])];
  }
  for (std::size_t c = 0; c < kClasses; ++c) {
    if (counts[c] == 0) throw TemplateError("class " + std::to_string(c) + " has no profiling traces");
    means.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
  }
  return pca_fit(means, n_components);
}

TemplateSet template_fit(const power::TraceSet& profiling, const POISet& poi, const PCAProjection& proj, int target_byte) {
  return template_fit(project_rows(proj, poi_matrix(profiling, poi)), profiling_labels(profiling, target_byte));
}

std::array<double, kClasses> class_log_likelihoods(const TemplateSet& t, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != t.dim()) throw std::invalid_argument("template dimension mismatch");
  const double constant = -0.5 * (static_cast<double>(t.dim()) * std::log(2.0 * std::numbers::pi) + t.log_det);
  std::array<double, kClasses> ll{};
  for (std::size_t c = 0; c < kClasses; ++c) {
    const Eigen::VectorXd diff = y - t.means.row(static_cast<Eigen::Index>(c)).transpose();
    ll[c] = constant - 0.5 * diff.dot(t.precision * diff);
  }
  return ll;
}

std::vector<ScoreVector> template_scores_at(const power::TraceSet& attack, const TemplateSet& t, const POISet& poi,
                                            const PCAProjection& proj, int target_byte,
                                            std::span<const std::size_t> grid) {
  if (proj.n_components() != t.dim()) throw std::invalid_argument("projection and templates differ in dimension");
  const auto tb = static_cast<std::size_t>(target_byte);
  const auto& table = hypothesis_table();
  std::vector<ScoreVector> out;
  out.reserve(grid.size());
  ScoreVector acc;
  std::size_t done = 0;
  for (std::size_t g : grid) {
    if (g < done || g > attack.size()) throw std::invalid_argument("invalid trace-count grid");
    if (g > done) {
      const Eigen::MatrixXd y = project_rows(proj, poi_matrix(attack.slice(done, g - done), poi));
      for (std::size_t i = 0; i < g - done; ++i) {
        const auto ll = class_log_likelihoods(t, y.row(static_cast<Eigen::Index>(i)).transpose());
        const std::uint8_t p = attack.plaintext(done + i)[tb];
        for (std::size_t k = 0; k < kGuesses; ++k) acc.scores[k] += ll[table[k][p]];
      }
    }
    done = g;
    out.push_back(acc);
  }
  return out;
}

ScoreVector template_attack(const power::TraceSet& attack, const TemplateSet& t, const POISet& poi,
                            const PCAProjection& proj, int target_byte) {
  const std::size_t all[] = {attack.size()};
  return template_scores_at(attack, t, poi, proj, target_byte, all).front();
}

}  // namespace slacksim::sca
