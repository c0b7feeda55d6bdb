#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "slacksim/power/trace.hpp"
#include "slacksim/sca/cpa.hpp"
#include "slacksim/sca/pca.hpp"
#include "slacksim/sca/poi.hpp"

namespace slacksim::sca {

/// Classes are HW(Sbox[p ^ k]) in 0..8.
inline constexpr std::size_t kClasses = 9;

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TemplateSet {
  Eigen::MatrixXd means;       // kClasses x dim
  Eigen::MatrixXd covariance;  // pooled, with `epsilon` added to the diagonal
  Eigen::MatrixXd precision;
  double log_det = 0.0;
  double epsilon = 0.0;
  std::array<std::size_t, kClasses> counts{};

  std::size_t dim() const noexcept { return static_cast<std::size_t>(means.cols()); }
};

/// Fits class means and a pooled covariance to already reduced observations.
/// Each class needs at least dim + 1 rows.
TemplateSet template_fit(const Eigen::MatrixXd& observations, std::span<const int> labels);

/// Rows of (x - mean) projected onto the PCA components.
Eigen::MatrixXd project_rows(const PCAProjection& proj, const Eigen::MatrixXd& rows);

/// Labels each profiling trace with HW(Sbox[p ^ k]) under its own key.
std::vector<int> profiling_labels(const power::TraceSet& profiling, int target_byte);

/// PCA basis spanned by the per-class mean rows. At most kClasses - 1
/// components carry variance. Throws TemplateError when a class is empty.
PCAProjection class_mean_pca(const Eigen::MatrixXd& rows, std::span<const int> labels, std::size_t n_components);

TemplateSet template_fit(const power::TraceSet& profiling, const POISet& poi, const PCAProjection& proj, int target_byte);

/// Gaussian log-density of `y` under each class.
std::array<double, kClasses> class_log_likelihoods(const TemplateSet& t, const Eigen::VectorXd& y);

ScoreVector template_attack(const power::TraceSet& attack, const TemplateSet& t, const POISet& poi,
                            const PCAProjection& proj, int target_byte);

/// Template scores after the first grid[j] traces, for every j.
std::vector<ScoreVector> template_scores_at(const power::TraceSet& attack, const TemplateSet& t, const POISet& poi,
                                            const PCAProjection& proj, int target_byte,
                                            std::span<const std::size_t> grid);

}  // namespace slacksim::sca
