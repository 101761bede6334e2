#include "fdens/kernels.hpp"

namespace fdens::kernels {

namespace detail {

void fill_chunk(std::span<const double> theta, std::span<const double> center, const ScoreLaw& law,
                std::size_t first, std::uint64_t chunk, std::uint64_t begin, std::uint64_t end, Seed seed,
                double* out) {
  Engine eng = make_engine(seed, chunk);
  ScoreSampler draw(law);
  for (std::uint64_t d = begin; d < end; ++d) {
    double sum = 0.0;
    for (std::size_t j = first; j < theta.size(); ++j) {
      const double w = draw(eng) - (j < center.size() ? center[j] : 0.0);
      sum += theta[j] * w * w;
    }
    out[d] = sum;
  }
}

}  // namespace detail

namespace serial {

Matrix covariance(const Matrix& centered) {
  const Eigen::Index m = centered.cols();
  Matrix cov(m, m);
  for (Eigen::Index s = 0; s < m; ++s)
    for (Eigen::Index t = s; t < m; ++t) cov(s, t) = cov(t, s) = detail::covariance_entry(centered, s, t);
  return cov;
}

std::vector<double> kde_values(std::span<const double> samples, double bandwidth, Kernel kernel,
                               std::span<const double> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (double u : points) out.push_back(detail::kde_at(samples, bandwidth, kernel, u));
  return out;
}

std::vector<double> weighted_square_sums(std::span<const double> theta, std::span<const double> center,
                                         const ScoreLaw& law, std::size_t first, std::uint64_t n_draws, Seed seed) {
  std::vector<double> out(n_draws);
  for (std::uint64_t c = 0, begin = 0; begin < n_draws; ++c, begin += kChunkSize)
    detail::fill_chunk(theta, center, law, first, c, begin, std::min(n_draws, begin + kChunkSize), seed, out.data());
  return out;
}

}  // namespace serial

}  // namespace fdens::kernels
