#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fdens/curvespace.hpp"

namespace fdens {

/// Relative eigenvalue floor: components with theta_j < kEigenvalueFloor * theta_1
/// are null and carry no standardized scores.
inline constexpr double kEigenvalueFloor = 1e-12;

/// Empirical Karhunen-Loeve decomposition of a functional sample.
struct FpcaModel {
  Grid grid;
  Curve mean;
  /// Non-increasing, clamped at zero.
  std::vector<double> eigenvalues;
  /// L2-orthonormal under the grid quadrature.
  std::vector<Curve> eigenfunctions;
  /// n x active_components() standardized scores; empty when built by decompose().
  Matrix scores;

  std::size_t components() const { return eigenvalues.size(); }
  /// Leading components whose eigenvalue clears the floor.
  std::size_t active_components() const;
  bool is_active(std::size_t j) const;
};

/// n^-1 sum_i (X_i - mean)(X_i - mean)^T on the grid. Throws NumericError for n < 2.
Matrix estimate_covariance(const FunctionalSample& s);

/// Solves the weighted eigenproblem integral K(s,t) psi(t) dt = theta psi(s) for the
/// leading J pairs. The returned model has a zero mean curve and no scores.
FpcaModel decompose(const Matrix& cov, const Grid& grid, std::size_t J);

/// Centre, estimate the covariance, decompose, and standardize the training scores.
/// Retains min(J, active components) components.
FpcaModel fit_fpca(const FunctionalSample& s, std::size_t J);

/// theta_j^{-1/2} <x - mean, psi_j>; null components are std::nullopt.
std::vector<std::optional<double>> project_scores(const FpcaModel& model, const Curve& x);

/// Scores for the active components only; throws if any of the first `count` is null.
std::vector<double> project_active_scores(const FpcaModel& model, const Curve& x, std::size_t count);

/// Proportion of total variance carried by the first j components.
double variance_explained(const FpcaModel& model, std::size_t j);

/// Applied by decompose(): positive quadrature integral, or positive largest entry
/// when the integral is within 1e-10 of zero.
void apply_sign_convention(Vector& psi, const Vector& weights);

}  // namespace fdens
