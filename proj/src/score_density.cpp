#include "fdens/score_density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdens/error.hpp"
#include "fdens/kernels.hpp"

namespace fdens {

Kernel parse_kernel(std::string_view name) {
  if (name == "gaussian") return Kernel::gaussian;
  if (name == "epanechnikov") return Kernel::epanechnikov;
  throw InputError("unknown kernel '" + std::string(name) + "' (expected gaussian or epanechnikov)");
}

namespace {

// Type-7 sample quantile (linear interpolation between order statistics).
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double bandwidth_normal_reference(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw InputError("normal-reference bandwidth needs at least two samples");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) throw NumericError("samples have zero spread; bandwidth undefined");
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

ScoreDensityEstimator::ScoreDensityEstimator(std::vector<double> samples, double bandwidth, Kernel kernel)
    : samples_(std::move(samples)), bandwidth_(bandwidth), kernel_(kernel) {
  if (samples_.empty()) throw InputError("density estimator needs at least one sample");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) throw InputError("bandwidth must be positive and finite");
  for (double x : samples_)
    if (!std::isfinite(x)) throw InputError("density estimator samples must be finite");
  const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
  min_ = *lo;
  max_ = *hi;
}

ScoreDensityEstimator ScoreDensityEstimator::fit(std::vector<double> samples, Kernel kernel) {
  const double bw = bandwidth_normal_reference(samples);
  return ScoreDensityEstimator(std::move(samples), bw, kernel);
}

double ScoreDensityEstimator::evaluate(double u) const { return kernels::detail::kde_at(samples_, bandwidth_, kernel_, u); }

std::vector<double> ScoreDensityEstimator::evaluate(std::span<const double> points) const {
  return kernels::kde_values(samples_, bandwidth_, kernel_, points);
}

double ScoreDensityEstimator::cache_mode() {
  if (!mode_) mode_ = find_mode(*this);
  return *mode_;
}

double find_mode(const ScoreDensityEstimator& est) {
  const double lo = est.sample_min() - 3.0 * est.bandwidth();
  const double hi = est.sample_max() + 3.0 * est.bandwidth();
  const std::size_t n_scan = kModeScanPoints;
  const double step = (hi - lo) / static_cast<double>(n_scan - 1);
  std::vector<double> xs(n_scan);
  for (std::size_t k = 0; k < n_scan; ++k) xs[k] = lo + step * static_cast<double>(k);
  xs.back() = hi;
  const std::vector<double> fs = est.evaluate(xs);

  std::size_t best = 0;
  for (std::size_t k = 1; k < n_scan; ++k)
    if (fs[k] > fs[best]) best = k;

  // Maximise on the bracketing cells; golden section keeps the better interior point.
  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[best + 1 == n_scan ? best : best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = est.evaluate(c), fd = est.evaluate(d);
  while (b - a > 1e-8) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = est.evaluate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = est.evaluate(d);
    }
  }
  const double refined = 0.5 * (a + b);
  return est.evaluate(refined) >= fs[best] ? refined : xs[best];
}

std::vector<ScoreDensityEstimator> fit_score_densities(const FpcaModel& model, std::size_t count, Kernel kernel,
                                                       std::optional<double> bandwidth) {
  if (count > static_cast<std::size_t>(model.scores.cols()))
    throw InputError("requested " + std::to_string(count) + " score densities but the model has " +
                     std::to_string(model.scores.cols()) + " scored components");
  std::vector<ScoreDensityEstimator> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto col = model.scores.col(static_cast<Eigen::Index>(j));
    std::vector<double> s(col.data(), col.data() + col.size());
    auto est = bandwidth && *bandwidth > 0.0 ? ScoreDensityEstimator(std::move(s), *bandwidth, kernel)
                                             : ScoreDensityEstimator::fit(std::move(s), kernel);
    est.cache_mode();
    out.push_back(std::move(est));
  }
  return out;
}

double ideal_kde_evaluate(const FunctionalSample& sample, double theta, const Curve& psi, const Curve& x,
                          double bandwidth, Kernel kernel) {
  if (!(theta > 0.0)) throw InputError("eigenvalue must be positive");
  if (!(bandwidth > 0.0)) throw InputError("bandwidth must be positive");
  require_same_grid(sample.grid(), psi.grid());
  require_same_grid(sample.grid(), x.grid());
  const Vector wpsi = sample.grid().weight_vector().cwiseProduct(psi.values());
  const double scale = bandwidth * std::sqrt(theta);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sample.values().rows(); ++i) {
    double proj = 0.0;
    for (Eigen::Index t = 0; t < wpsi.size(); ++t) proj += (sample.values()(i, t) - x.values()[t]) * wpsi[t];
    sum += kernel_value(kernel, proj / scale);
  }
  return sum / (static_cast<double>(sample.size()) * bandwidth);
}

}  // namespace fdens
