#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fdens/curvespace.hpp"
#include "fdens/rng.hpp"

namespace fdens {

/// The four generative models: X(t) = sum_{j<=J} theta_j^{1/2} c T V_j psi_j(t),
/// psi_j(t) = sqrt2 cos(pi j t) on [0,1], T ~ U[1,2] shared by all components,
/// c = var(T V)^{-1/2}.
///   i:   V ~ chi2(8) - 8, theta_j = j^-3
///   ii:  V ~ chi2(8) - 8, theta_j = j^-2
///   iii: V ~ N(0,1),      theta_j = j^-3
///   iv:  V ~ N(0,1),      theta_j = j^-2
enum class SimModel { i, ii, iii, iv };

SimModel parse_sim_model(const std::string& name);
std::string sim_model_name(SimModel model);

struct SimScenario {
  SimModel model = SimModel::iii;
  std::size_t n = 100;
  std::size_t m = 201;
  std::size_t J = 10;
  Seed seed = 1;
};

struct GeneratedSample {
  FunctionalSample sample;
  std::vector<double> theta;
  std::vector<Curve> psi;
  /// n x J matrix of the standardized scores c T V_j.
  Matrix true_scores;
};

std::vector<double> model_eigenvalues(SimModel model, std::size_t J);
std::vector<Curve> cosine_basis(const Grid& grid, std::size_t J);
/// c = var(T V)^{-1/2}: sqrt(3/7) for normal V, sqrt(3/112) for chi2(8) - 8.
double mixing_constant(SimModel model);

/// Curve i uses RNG substream i of the scenario seed, so output does not depend on
/// the worker count.
GeneratedSample generate_sample(const SimScenario& sc);

/// Mode of the density of c T V, by quadrature of the T-mixture and golden-section
/// search. Zero for the symmetric models.
double score_mode(SimModel model);
/// Density of c T V at y, integrating the T-mixture numerically.
double score_density(SimModel model, double y);

/// sum_{j<=J} theta_j^{1/2} m psi_j with m = score_mode(model).
Curve true_modal_curve(SimModel model, const Grid& grid, std::size_t J);

struct MseResult {
  Curve pointwise;
  double integrated;
};

/// Pointwise mean squared deviation of the estimates from the truth, and its integral.
MseResult mse_curve(const std::vector<Curve>& estimates, const Curve& truth);

enum class ModalEstimator { univariate, multivariate };
std::string modal_estimator_name(ModalEstimator e);

struct ModeStudyConfig {
  std::vector<SimModel> models;
  std::size_t replications = 100;
  std::size_t n = 100;
  std::size_t m = 201;
  std::vector<std::size_t> truncations{1, 2, 3, 4};
  std::vector<ModalEstimator> estimators{ModalEstimator::univariate, ModalEstimator::multivariate};
  Seed seed = 1;
};

struct ModeStudyRow {
  SimModel model;
  ModalEstimator estimator;
  std::size_t T;
  double imse;
};

/// Replication b of model k uses seed substream_seed(seed, k * 2^32 + b). Replications run in
/// parallel; errors are accumulated in replication order.
std::vector<ModeStudyRow> run_mode_study(const ModeStudyConfig& config);

}  // namespace fdens
