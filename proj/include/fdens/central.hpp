#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fdens/curvespace.hpp"
#include "fdens/fpca.hpp"
#include "fdens/score_density.hpp"

namespace fdens {

Curve mean_curve(const FunctionalSample& s);

/// mean + sum_{j<=T} theta_j^{1/2} m_j psi_j, with m_j the cached (or freshly found)
/// mode of density j.
Curve modal_curve(const FpcaModel& model, std::span<const ScoreDensityEstimator> densities, std::size_t T);

inline constexpr std::size_t kMaxJointModeDimension = 4;

struct JointMode {
  std::vector<double> location;
  std::size_t iterations = 0;
};

/// Mode of a product-gaussian kernel estimate in T <= 4 dimensions (per-dimension
/// normal-reference bandwidths), by gradient ascent with backtracking from the
/// sample point of highest estimated density. Single start, so a local mode is possible.
JointMode joint_score_mode(const Matrix& scores, std::size_t T);

/// mean + sum_{j<=T} theta_j^{1/2} m~_j psi_j with m~ = joint_score_mode of the first T columns.
Curve multivariate_modal_curve(const FpcaModel& model, std::size_t T);

struct MedianResult {
  Curve curve;
  std::size_t iterations = 0;
  double final_step = 0.0;
  bool converged = false;
  /// sum_i ||X_i - x_k|| for the starting point and every iterate.
  std::vector<double> objective;
};

/// Spatial median by Weiszfeld iteration started from the mean, with distances floored at 1e-10.
MedianResult median_curve(const FunctionalSample& s, double tol = 1e-8, std::size_t max_iter = 500);

struct CentralCurveSet {
  Curve mean;
  Curve mode;
  MedianResult median;
  std::size_t T;
};

CentralCurveSet central_curves(const FunctionalSample& s, const FpcaModel& model,
                               std::span<const ScoreDensityEstimator> densities, std::size_t T);

}  // namespace fdens
