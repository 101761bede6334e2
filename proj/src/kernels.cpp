#include "fdens/kernels.hpp"

#include <omp.h>

namespace fdens::kernels {

Matrix covariance(const Matrix& centered) {
  const Eigen::Index m = centered.cols();
  Matrix cov(m, m);
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index s = 0; s < m; ++s) {
    for (Eigen::Index t = s; t < m; ++t) {
      const double v = detail::covariance_entry(centered, s, t);
      cov(s, t) = v;
      cov(t, s) = v;
    }
  }
  return cov;
}

std::vector<double> kde_values(std::span<const double> samples, double bandwidth, Kernel kernel,
                               std::span<const double> points) {
  std::vector<double> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = detail::kde_at(samples, bandwidth, kernel, points[k]);
  return out;
}

std::vector<double> weighted_square_sums(std::span<const double> theta, std::span<const double> center,
                                         const ScoreLaw& law, std::size_t first, std::uint64_t n_draws, Seed seed) {
  std::vector<double> out(n_draws);
  const auto n_chunks = static_cast<std::ptrdiff_t>((n_draws + kChunkSize - 1) / kChunkSize);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < n_chunks; ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunkSize;
    const std::uint64_t end = std::min(n_draws, begin + kChunkSize);
    detail::fill_chunk(theta, center, law, first, static_cast<std::uint64_t>(c), begin, end, seed, out.data());
  }
  return out;
}

}  // namespace fdens::kernels
