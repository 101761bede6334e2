#include "fdens/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fdens/error.hpp"

namespace fdens {

double LogDensityValue::product() const { return std::exp(static_cast<double>(r) * value); }

LogDensityValue log_density_from_scores(std::span<const ScoreDensityEstimator> densities,
                                        std::span<const double> scores, std::size_t r) {
  if (r == 0) throw InputError("log-density dimension r must be at least 1");
  if (r > densities.size() || r > scores.size())
    throw InputError("r = " + std::to_string(r) + " exceeds the " + std::to_string(std::min(densities.size(), scores.size())) +
                     " available components");
  LogDensityValue out;
  out.r = r;
  out.contributions.resize(r);
  out.floored.resize(r);
  for (std::size_t j = 0; j < r; ++j) {
    const double f = densities[j].evaluate(scores[j]);
    out.floored[j] = f < kDensityFloor;
    out.contributions[j] = std::log(std::max(f, kDensityFloor));
  }
  std::vector<double> sorted = out.contributions;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double c : sorted) sum += c;
  out.value = sum / static_cast<double>(r);
  return out;
}

LogDensityValue log_density(const FpcaModel& model, std::span<const ScoreDensityEstimator> densities,
                            const Curve& x, std::size_t r) {
  if (r == 0) throw InputError("log-density dimension r must be at least 1");
  if (r > densities.size()) throw InputError("r = " + std::to_string(r) + " exceeds the " +
                                             std::to_string(densities.size()) + " fitted score densities");
  const std::vector<double> scores = project_active_scores(model, x, r);
  return log_density_from_scores(densities, scores, r);
}

ContourGrid density_product_grid(const FpcaModel& model, std::span<const ScoreDensityEstimator> densities,
                                 std::pair<std::size_t, std::size_t> components, const ScorePlaneGrid& spec) {
  const auto [j1, j2] = components;
  if (j1 < 1 || j2 < 1 || j1 > densities.size() || j2 > densities.size())
    throw InputError("contour components must both be fitted");
  if (spec.u_count == 0 || spec.v_count == 0) throw InputError("contour grid is empty");
  auto axis = [](double lo, double hi, std::size_t count) {
    std::vector<double> a(count);
    if (count == 1) {
      a[0] = lo;
      return a;
    }
    for (std::size_t k = 0; k < count; ++k) a[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    return a;
  };

  ContourGrid out{components, axis(spec.u_lower, spec.u_upper, spec.u_count),
                  axis(spec.v_lower, spec.v_upper, spec.v_count), Matrix(), {}};
  const auto& d1 = densities[j1 - 1];
  const auto& d2 = densities[j2 - 1];
  const std::vector<double> fu = d1.evaluate(out.u);
  const std::vector<double> fv = d2.evaluate(out.v);
  out.values.resize(static_cast<Eigen::Index>(fu.size()), static_cast<Eigen::Index>(fv.size()));
  for (std::size_t a = 0; a < fu.size(); ++a)
    for (std::size_t b = 0; b < fv.size(); ++b)
      out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = fu[a] * fv[b];

  const Eigen::Index n = model.scores.rows();
  out.datum_values.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    out.datum_values[static_cast<std::size_t>(i)] = d1.evaluate(model.scores(i, static_cast<Eigen::Index>(j1 - 1))) *
                                                    d2.evaluate(model.scores(i, static_cast<Eigen::Index>(j2 - 1)));
  return out;
}

DensityRanking rank_by_density(const FpcaModel& model, std::span<const ScoreDensityEstimator> densities,
                               std::size_t r, std::size_t n_groups) {
  const auto n = static_cast<std::size_t>(model.scores.rows());
  if (n_groups < 1) throw InputError("need at least one group");
  if (n_groups > n) throw InputError("cannot form " + std::to_string(n_groups) + " groups from " + std::to_string(n) + " curves");
  if (r > static_cast<std::size_t>(model.scores.cols())) throw InputError("r exceeds the scored components");

  DensityRanking out;
  out.log_density.resize(n);
  std::vector<double> row(r);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) row[j] = model.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    out.log_density[i] = log_density_from_scores(densities, row, r).value;
  }
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return out.log_density[a] < out.log_density[b]; });
  out.group.resize(n);
  for (std::size_t rank = 0; rank < n; ++rank) out.group[out.order[rank]] = rank * n_groups / n;
  return out;
}

}  // namespace fdens
