#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fdens/curvespace.hpp"
#include "fdens/fpca.hpp"
#include "fdens/kde_kernel.hpp"
#include "fdens/rng.hpp"

namespace fdens {

/// 0.9 min(sd, IQR/1.34) n^{-1/5}. Throws NumericError on zero spread, InputError for n < 2.
double bandwidth_normal_reference(std::span<const double> samples);

/// Univariate kernel density estimate of one principal component score.
class ScoreDensityEstimator {
 public:
  ScoreDensityEstimator(std::vector<double> samples, double bandwidth, Kernel kernel = Kernel::gaussian);
  /// Normal-reference bandwidth.
  static ScoreDensityEstimator fit(std::vector<double> samples, Kernel kernel = Kernel::gaussian);

  double evaluate(double u) const;
  /// Parallel over the evaluation points.
  std::vector<double> evaluate(std::span<const double> points) const;

  std::span<const double> samples() const { return samples_; }
  double bandwidth() const { return bandwidth_; }
  Kernel kernel() const { return kernel_; }
  double sample_min() const { return min_; }
  double sample_max() const { return max_; }

  const std::optional<double>& cached_mode() const { return mode_; }
  /// Runs find_mode once and stores the result.
  double cache_mode();

 private:
  std::vector<double> samples_;
  double bandwidth_;
  Kernel kernel_;
  double min_ = 0.0, max_ = 0.0;
  std::optional<double> mode_;
};

inline constexpr std::size_t kModeScanPoints = 512;

/// Global maximiser of the estimate over [min - 3 bw, max + 3 bw]: a 512-point
/// scan, then golden-section refinement on the cells either side of the best scan
/// point down to width 1e-8. Ties go to the smallest abscissa.
double find_mode(const ScoreDensityEstimator& est);

/// Per-component estimators for the first `count` score columns of a fitted model,
/// with modes cached. A positive `bandwidth` overrides the normal-reference rule.
std::vector<ScoreDensityEstimator> fit_score_densities(const FpcaModel& model, std::size_t count,
                                                       Kernel kernel = Kernel::gaussian,
                                                       std::optional<double> bandwidth = std::nullopt);

/// (n bw)^-1 sum_i W(<X_i - x, psi> / (bw theta^{1/2})). With the true eigenpair this is the
/// ideal estimate of the score density at x's score; with an estimated pair it is the
/// direct form of the plug-in estimate at the projected score.
double ideal_kde_evaluate(const FunctionalSample& sample, double theta, const Curve& psi, const Curve& x,
                          double bandwidth, Kernel kernel = Kernel::gaussian);

}  // namespace fdens
