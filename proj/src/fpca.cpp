#include "fdens/fpca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "fdens/error.hpp"
#include "fdens/kernels.hpp"

namespace fdens {

std::size_t FpcaModel::active_components() const {
  std::size_t k = 0;
  while (k < eigenvalues.size() && is_active(k)) ++k;
  return k;
}

bool FpcaModel::is_active(std::size_t j) const {
  if (j >= eigenvalues.size() || eigenvalues.empty()) return false;
  return eigenvalues[0] > 0.0 && eigenvalues[j] >= kEigenvalueFloor * eigenvalues[0];
}

Matrix estimate_covariance(const FunctionalSample& s) {
  if (s.size() < 2) throw NumericError("covariance needs at least two curves, got " + std::to_string(s.size()));
  return kernels::covariance(center_sample(s).centered.values());
}

void apply_sign_convention(Vector& psi, const Vector& weights) {
  const double integral = weights.dot(psi);
  bool flip;
  if (std::abs(integral) > 1e-10) {
    flip = integral < 0.0;
  } else {
    Eigen::Index at = 0;
    for (Eigen::Index t = 1; t < psi.size(); ++t)
      if (std::abs(psi[t]) > std::abs(psi[at])) at = t;
    flip = psi[at] < 0.0;
  }
  if (flip) psi = -psi;
}

FpcaModel decompose(const Matrix& cov, const Grid& grid, std::size_t J) {
  const auto m = static_cast<Eigen::Index>(grid.size());
  if (cov.rows() != m || cov.cols() != m)
    throw InputError("covariance is " + std::to_string(cov.rows()) + "x" + std::to_string(cov.cols()) +
                     " but grid has " + std::to_string(m) + " points");
  if (J > grid.size()) throw InputError("cannot extract " + std::to_string(J) + " components from a " +
                                        std::to_string(m) + "-point grid");
  if (!cov.allFinite()) throw InputError("covariance contains non-finite entries");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("covariance matrix is not symmetric");

  const Vector root_w = grid.weight_vector().cwiseSqrt();
  const Matrix weighted = root_w.asDiagonal() * cov * root_w.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (weighted + weighted.transpose()));
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");

  FpcaModel model{grid, Curve::zero(grid), {}, {}, Matrix()};
  model.eigenvalues.reserve(J);
  model.eigenfunctions.reserve(J);
  for (std::size_t k = 0; k < J; ++k) {
    const Eigen::Index col = m - 1 - static_cast<Eigen::Index>(k);
    Vector psi = solver.eigenvectors().col(col).cwiseQuotient(root_w);
    psi /= std::sqrt(grid.weight_vector().dot(psi.cwiseProduct(psi)));
    apply_sign_convention(psi, grid.weight_vector());
    model.eigenvalues.push_back(std::max(0.0, solver.eigenvalues()[col]));
    model.eigenfunctions.emplace_back(grid, std::move(psi));
  }
  return model;
}

FpcaModel fit_fpca(const FunctionalSample& s, std::size_t J) {
  if (J == 0) throw InputError("number of components must be at least 1");
  auto [mean, centered] = center_sample(s);
  if (s.size() < 2) throw NumericError("FPCA needs at least two curves");
  const Matrix cov = kernels::covariance(centered.values());
  FpcaModel model = decompose(cov, s.grid(), std::min(J, s.grid().size()));
  model.mean = std::move(mean);

  const std::size_t active = model.active_components();
  if (active == 0) throw NumericError("sample has zero total variance");
  model.eigenvalues.resize(active);
  model.eigenfunctions.erase(model.eigenfunctions.begin() + static_cast<std::ptrdiff_t>(active),
                             model.eigenfunctions.end());

  Matrix basis(static_cast<Eigen::Index>(s.grid().size()), static_cast<Eigen::Index>(active));
  for (std::size_t j = 0; j < active; ++j)
    basis.col(static_cast<Eigen::Index>(j)) =
        s.grid().weight_vector().cwiseProduct(model.eigenfunctions[j].values()) / std::sqrt(model.eigenvalues[j]);
  model.scores = centered.values() * basis;
  return model;
}

std::vector<std::optional<double>> project_scores(const FpcaModel& model, const Curve& x) {
  require_same_grid(model.grid, x.grid());
  const Curve d = x - model.mean;
  std::vector<std::optional<double>> out(model.components());
  for (std::size_t j = 0; j < model.components(); ++j)
    if (model.is_active(j)) out[j] = inner_product(d, model.eigenfunctions[j]) / std::sqrt(model.eigenvalues[j]);
  return out;
}

std::vector<double> project_active_scores(const FpcaModel& model, const Curve& x, std::size_t count) {
  const auto all = project_scores(model, x);
  if (count > all.size()) throw InputError("requested " + std::to_string(count) + " scores but model has " +
                                           std::to_string(all.size()) + " components");
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    if (!all[j]) throw NumericError("component " + std::to_string(j + 1) + " has a null eigenvalue");
    out[j] = *all[j];
  }
  return out;
}

double variance_explained(const FpcaModel& model, std::size_t j) {
  if (j < 1 || j > model.components())
    throw InputError("variance_explained index must be in [1, " + std::to_string(model.components()) + "]");
  double total = 0.0, head = 0.0;
  for (std::size_t k = 0; k < model.components(); ++k) {
    total += model.eigenvalues[k];
    if (k < j) head += model.eigenvalues[k];
  }
  if (!(total > 0.0)) throw NumericError("total variance is zero");
  return head / total;
}

}  // namespace fdens
