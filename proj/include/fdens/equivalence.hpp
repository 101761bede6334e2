#pragma once

#include <cstddef>
#include <vector>

#include "fdens/kde_kernel.hpp"
#include "fdens/simulation.hpp"

namespace fdens {

struct EquivalenceGapRow {
  std::size_t n;
  double bandwidth;
  double max_gap;
  double median_gap;
  /// (n bandwidth)^{1/2} max_gap
  double scaled_max_gap;
};

struct EquivalenceGapOptions {
  std::size_t component = 1;
  Kernel kernel = Kernel::gaussian;
  /// Replace the estimated eigenpair by the true one; the gap is then identically zero.
  bool use_true_eigenpair = false;
};

/// Gap |f^_j(x^_j) - f-_j(x_j)| between the plug-in and ideal score-density estimates over
/// n_test fresh curves from the scenario's model, for each training size in n_list.
/// Training sample for size n_list[k] uses substream (seed, k); test curves use
/// substream (seed, 2^40).
std::vector<EquivalenceGapRow> equivalence_gap(const SimScenario& scenario, const std::vector<std::size_t>& n_list,
                                               std::size_t n_test, Seed seed,
                                               const EquivalenceGapOptions& options = {});

}  // namespace fdens
