#include "slacksim/sca/pca.hpp"

#include <stdexcept>

namespace slacksim::sca {

Eigen::MatrixXd poi_matrix(const power::TraceSet& ts, const POISet& poi) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(ts.size()), static_cast<Eigen::Index>(poi.indices.size()));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto t = ts.trace(i);
    for (std::size_t j = 0; j < poi.indices.size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t[poi.indices[j]];
    }
  }
  return m;
}

PCAProjection pca_fit(const Eigen::MatrixXd& rows, std::size_t n_components) {
  const auto n = static_cast<std::size_t>(rows.rows());
  const auto d = static_cast<std::size_t>(rows.cols());
  if (n_components == 0) throw std::invalid_argument("PCA needs at least one component");
  if (n_components > d || n_components > n) throw std::invalid_argument("more PCA components than inputs or observations");

  PCAProjection p;
  p.mean = rows.colwise().mean().transpose();
  const Eigen::MatrixXd centred = rows.rowwise() - p.mean.transpose();
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centred.transpose(), 1.0 / denom);
  cov = cov.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("PCA eigendecomposition failed");
  // Eigen sorts ascending; take from the back.
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double tol = std::max(values.cwiseAbs().maxCoeff(), 1e-300) * 1e-12 * static_cast<double>(d);
  std::size_t kept = 0;
  while (kept < n_components && values(static_cast<Eigen::Index>(d - 1 - kept)) > tol) ++kept;
  p.rank_deficient = kept < n_components;
  if (kept == 0) kept = 1;

  p.components.resize(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(d));
  p.explained.resize(static_cast<Eigen::Index>(kept));
  for (std::size_t c = 0; c < kept; ++c) {
    const auto col = static_cast<Eigen::Index>(d - 1 - c);
    Eigen::VectorXd v = eig.eigenvectors().col(col);
    // Fix the sign so the largest-magnitude coordinate is positive.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    p.components.row(static_cast<Eigen::Index>(c)) = v.transpose();
    p.explained(static_cast<Eigen::Index>(c)) = values(col);
  }
  return p;
}

PCAProjection pca_truncate(const PCAProjection& proj, std::size_t n) {
  if (n == 0 || n > proj.n_components()) throw std::invalid_argument("invalid PCA truncation");
  PCAProjection p;
  p.mean = proj.mean;
  p.components = proj.components.topRows(static_cast<Eigen::Index>(n));
  p.explained = proj.explained.head(static_cast<Eigen::Index>(n));
  p.rank_deficient = proj.rank_deficient;
  return p;
}

Eigen::VectorXd pca_project(const PCAProjection& proj, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != proj.n_inputs()) throw std::invalid_argument("PCA input dimension mismatch");
  return proj.components * (x - proj.mean);
}

}  // namespace slacksim::sca
