#include "fdens/central.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdens/error.hpp"

namespace fdens {

Curve mean_curve(const FunctionalSample& s) {
  return Curve(s.grid(), Vector(s.values().colwise().mean().transpose()));
}

Curve modal_curve(const FpcaModel& model, std::span<const ScoreDensityEstimator> densities, std::size_t T) {
  if (T == 0) throw InputError("modal curve truncation T must be at least 1");
  if (T > densities.size() || T > model.components())
    throw InputError("truncation T = " + std::to_string(T) + " exceeds the " + std::to_string(densities.size()) +
                     " fitted score densities");
  Vector v = model.mean.values();
  for (std::size_t j = 0; j < T; ++j) {
    const double mode = densities[j].cached_mode() ? *densities[j].cached_mode() : find_mode(densities[j]);
    v += std::sqrt(model.eigenvalues[j]) * mode * model.eigenfunctions[j].values();
  }
  return Curve(model.grid, std::move(v));
}

namespace {

struct ProductKde {
  const Matrix& scores;
  std::size_t dim;
  std::vector<double> bandwidth;

  // Unnormalised density (normalising constants do not move the mode).
  double value(std::span<const double> y) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) sum += weight(i, y);
    return sum;
  }
  double weight(Eigen::Index i, std::span<const double> y) const {
    double q = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double z = (scores(i, static_cast<Eigen::Index>(d)) - y[d]) / bandwidth[d];
      q += z * z;
    }
    return std::exp(-0.5 * q);
  }
  /// bw_d^2 * d/dy_d log f, i.e. the mean-shift vector.
  std::vector<double> ascent_direction(std::span<const double> y) const {
    std::vector<double> num(dim, 0.0);
    double den = 0.0;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      const double w = weight(i, y);
      den += w;
      for (std::size_t d = 0; d < dim; ++d) num[d] += w * scores(i, static_cast<Eigen::Index>(d));
    }
    for (std::size_t d = 0; d < dim; ++d) num[d] = den > 0.0 ? num[d] / den - y[d] : 0.0;
    return num;
  }
};

}  // namespace

JointMode joint_score_mode(const Matrix& scores, std::size_t T) {
  if (T == 0 || T > kMaxJointModeDimension)
    throw InputError("joint mode dimension must be in [1, " + std::to_string(kMaxJointModeDimension) + "]");
  if (T > static_cast<std::size_t>(scores.cols()))
    throw InputError("joint mode dimension exceeds the number of score columns");
  const Eigen::Index n = scores.rows();

  ProductKde kde{scores, T, std::vector<double>(T, 1.0)};
  if (n >= 2) {
    for (std::size_t d = 0; d < T; ++d) {
      const auto col = scores.col(static_cast<Eigen::Index>(d));
      kde.bandwidth[d] = bandwidth_normal_reference(std::span<const double>(col.data(), static_cast<std::size_t>(n)));
    }
  }

  std::vector<double> y(T);
  double best = -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> p(T);
    for (std::size_t d = 0; d < T; ++d) p[d] = scores(i, static_cast<Eigen::Index>(d));
    const double f = kde.value(p);
    if (f > best) {
      best = f;
      y = std::move(p);
    }
  }

  JointMode out;
  double fy = best;
  for (std::size_t it = 0; it < 1000; ++it) {
    const std::vector<double> dir = kde.ascent_direction(y);
    double norm2 = 0.0;
    for (std::size_t d = 0; d < T; ++d) norm2 += (dir[d] / kde.bandwidth[d]) * (dir[d] / kde.bandwidth[d]);
    out.iterations = it + 1;
    if (norm2 < 1e-20) break;
    // Backtracking on the mean-shift step; alpha = 1 is the mean-shift update itself.
    double alpha = 1.0;
    std::vector<double> next(T);
    bool improved = false;
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      for (std::size_t d = 0; d < T; ++d) next[d] = y[d] + alpha * dir[d];
      const double fn = kde.value(next);
      if (fn > fy) {
        fy = fn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    y = next;
  }
  out.location = std::move(y);
  return out;
}

Curve multivariate_modal_curve(const FpcaModel& model, std::size_t T) {
  const JointMode mode = joint_score_mode(model.scores, T);
  Vector v = model.mean.values();
  for (std::size_t j = 0; j < T; ++j)
    v += std::sqrt(model.eigenvalues[j]) * mode.location[j] * model.eigenfunctions[j].values();
  return Curve(model.grid, std::move(v));
}

namespace {

double objective(const FunctionalSample& s, const Vector& x, const Vector& w) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.values().rows(); ++i) {
    const Vector d = s.values().row(i).transpose() - x;
    sum += std::sqrt(w.dot(d.cwiseProduct(d)));
  }
  return sum;
}

}  // namespace

MedianResult median_curve(const FunctionalSample& s, double tol, std::size_t max_iter) {
  if (!(tol > 0.0)) throw InputError("median tolerance must be positive");
  const Vector& w = s.grid().weight_vector();
  const Eigen::Index n = s.values().rows();
  Vector x = s.values().colwise().mean().transpose();

  MedianResult out{Curve(s.grid(), x), 0, 0.0, false, {objective(s, x, w)}};
  for (std::size_t it = 0; it < max_iter; ++it) {
    Vector num = Vector::Zero(x.size());
    double den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector d = s.values().row(i).transpose() - x;
      const double dist = std::max(std::sqrt(w.dot(d.cwiseProduct(d))), 1e-10);
      num += s.values().row(i).transpose() / dist;
      den += 1.0 / dist;
    }
    Vector next = num / den;
    const Vector step = next - x;
    out.final_step = std::sqrt(w.dot(step.cwiseProduct(step)));
    x = std::move(next);
    out.iterations = it + 1;
    out.objective.push_back(objective(s, x, w));
    if (out.final_step < tol) {
      out.converged = true;
      break;
    }
  }
  out.curve = Curve(s.grid(), std::move(x));
  return out;
}

CentralCurveSet central_curves(const FunctionalSample& s, const FpcaModel& model,
                               std::span<const ScoreDensityEstimator> densities, std::size_t T) {
  return {mean_curve(s), modal_curve(model, densities, T), median_curve(s), T};
}

}  // namespace fdens
