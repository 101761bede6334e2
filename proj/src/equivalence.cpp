#include "fdens/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdens/error.hpp"
#include "fdens/fpca.hpp"
#include "fdens/score_density.hpp"

namespace fdens {

std::vector<EquivalenceGapRow> equivalence_gap(const SimScenario& scenario, const std::vector<std::size_t>& n_list,
                                               std::size_t n_test, Seed seed, const EquivalenceGapOptions& options) {
  std::vector<EquivalenceGapRow> rows;
  if (n_test == 0) return rows;
  const std::size_t j = options.component;
  if (j < 1 || j > scenario.J) throw InputError("component must be in [1, " + std::to_string(scenario.J) + "]");
  for (std::size_t k = 1; k < n_list.size(); ++k)
    if (n_list[k] <= n_list[k - 1]) throw InputError("sample sizes must be increasing");

  SimScenario test_sc = scenario;
  test_sc.n = n_test;
  test_sc.seed = substream_seed(seed, std::uint64_t{1} << 40);
  const GeneratedSample tests = generate_sample(test_sc);

  for (std::size_t k = 0; k < n_list.size(); ++k) {
    SimScenario sc = scenario;
    sc.n = n_list[k];
    sc.seed = substream_seed(seed, k);
    const GeneratedSample gen = generate_sample(sc);
    const FpcaModel fit = fit_fpca(gen.sample, j);
    if (fit.components() < j) throw NumericError("component " + std::to_string(j) + " is null in the fitted model");

    const auto col = fit.scores.col(static_cast<Eigen::Index>(j - 1));
    const double bw = bandwidth_normal_reference(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())));
    const double theta_true = gen.theta[j - 1];
    const Curve& psi_true = gen.psi[j - 1];
    const double theta_hat = options.use_true_eigenpair ? theta_true : fit.eigenvalues[j - 1];
    const Curve& psi_hat = options.use_true_eigenpair ? psi_true : fit.eigenfunctions[j - 1];

    std::vector<double> gaps(n_test);
    for (std::size_t t = 0; t < n_test; ++t) {
      const Curve x = tests.sample.curve(t);
      const double plug_in = ideal_kde_evaluate(gen.sample, theta_hat, psi_hat, x, bw, options.kernel);
      const double ideal = ideal_kde_evaluate(gen.sample, theta_true, psi_true, x, bw, options.kernel);
      gaps[t] = std::abs(plug_in - ideal);
    }
    std::sort(gaps.begin(), gaps.end());
    const double median = n_test % 2 ? gaps[n_test / 2] : 0.5 * (gaps[n_test / 2 - 1] + gaps[n_test / 2]);
    const double max_gap = gaps.back();
    rows.push_back({sc.n, bw, max_gap, median, std::sqrt(static_cast<double>(sc.n) * bw) * max_gap});
  }
  return rows;
}

}  // namespace fdens
