#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fdens/curvespace.hpp"
#include "fdens/fpca.hpp"
#include "fdens/score_density.hpp"

namespace fdens {

/// Densities below this are raised to it before taking logs (reachable only with
/// compact-support kernels).
inline constexpr double kDensityFloor = 1e-12;

struct LogDensityValue {
  std::size_t r = 0;
  /// Mean of the contributions, in nats. Contributions are summed in ascending
  /// order so the value does not depend on the order of the components.
  double value = 0.0;
  /// log max(f_j(x_j), floor), in component order.
  std::vector<double> contributions;
  std::vector<bool> floored;

  /// prod_{j<=r} f_j(x_j) = exp(r * value).
  double product() const;
};

/// Mean log-density from precomputed scores: component j uses densities[j] at scores[j].
LogDensityValue log_density_from_scores(std::span<const ScoreDensityEstimator> densities,
                                        std::span<const double> scores, std::size_t r);

/// Log-density surrogate of curve x at resolution r.
LogDensityValue log_density(const FpcaModel& model, std::span<const ScoreDensityEstimator> densities,
                            const Curve& x, std::size_t r);

struct ScorePlaneGrid {
  double u_lower, u_upper;
  std::size_t u_count;
  double v_lower, v_upper;
  std::size_t v_count;
};

struct ContourGrid {
  std::pair<std::size_t, std::size_t> components;  // 1-based
  std::vector<double> u, v;
  /// values(a, b) = f_{j1}(u_a) f_{j2}(v_b)
  Matrix values;
  /// f_{j1}(X_i,j1) f_{j2}(X_i,j2) for every training curve.
  std::vector<double> datum_values;
};

ContourGrid density_product_grid(const FpcaModel& model, std::span<const ScoreDensityEstimator> densities,
                                 std::pair<std::size_t, std::size_t> components, const ScorePlaneGrid& spec);

struct DensityRanking {
  std::vector<double> log_density;
  /// Group per training curve; 0 holds the lowest densities.
  std::vector<std::size_t> group;
  /// Curve indices in increasing log-density order (ties by index).
  std::vector<std::size_t> order;
};

DensityRanking rank_by_density(const FpcaModel& model, std::span<const ScoreDensityEstimator> densities,
                               std::size_t r, std::size_t n_groups);

}  // namespace fdens
