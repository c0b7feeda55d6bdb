#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "slacksim/power/trace.hpp"
#include "slacksim/sca/poi.hpp"

namespace slacksim::sca {

struct PCAProjection {
  Eigen::VectorXd mean;
  /// n_components x n_poi, orthonormal rows.
  Eigen::MatrixXd components;
  /// Eigenvalues of the kept components, descending.
  Eigen::VectorXd explained;
  /// Set when fewer than the requested components had nonzero variance.
  bool rank_deficient = false;

  std::size_t n_components() const noexcept { return static_cast<std::size_t>(components.rows()); }
  std::size_t n_inputs() const noexcept { return static_cast<std::size_t>(components.cols()); }
};

/// Traces restricted to the POI columns, one row per trace.
Eigen::MatrixXd poi_matrix(const power::TraceSet& ts, const POISet& poi);

/// Mean-centred eigendecomposition of the sample covariance of `rows`.
PCAProjection pca_fit(const Eigen::MatrixXd& rows, std::size_t n_components);

/// Keeps the first `n` components of a fit.
PCAProjection pca_truncate(const PCAProjection& proj, std::size_t n);

Eigen::VectorXd pca_project(const PCAProjection& proj, const Eigen::VectorXd& x);

}  // namespace slacksim::sca
