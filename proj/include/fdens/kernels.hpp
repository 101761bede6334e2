#pragma once

// Data-parallel inner loops. Each function in fdens::kernels has a
// single-threaded twin in fdens::kernels::serial that performs the same
// floating-point operations in the same order; tests require the two to agree
// bit for bit, and bench/ compares their speed.

#include <cstdint>
#include <span>
#include <vector>

#include "fdens/curvespace.hpp"
#include "fdens/kde_kernel.hpp"
#include "fdens/rng.hpp"
#include "fdens/score_law.hpp"

namespace fdens::kernels {

/// n^-1 C^T C for a centred n x m matrix; entry (s,t) accumulates rows in index order.
Matrix covariance(const Matrix& centered);

/// Kernel density estimate (n bw)^-1 sum_i W((x_i - u)/bw) at every point u.
std::vector<double> kde_values(std::span<const double> samples, double bandwidth, Kernel kernel,
                               std::span<const double> points);

/// n_draws realisations of sum_{j >= first} theta_j (X_j - x_j)^2 with X_j drawn
/// from `law`; draw d belongs to chunk d / kChunkSize, whose engine is substream
/// `chunk` of `seed`. Components beyond center.size() use x_j = 0.
std::vector<double> weighted_square_sums(std::span<const double> theta, std::span<const double> center,
                                         const ScoreLaw& law, std::size_t first, std::uint64_t n_draws, Seed seed);

namespace serial {

Matrix covariance(const Matrix& centered);
std::vector<double> kde_values(std::span<const double> samples, double bandwidth, Kernel kernel,
                               std::span<const double> points);
std::vector<double> weighted_square_sums(std::span<const double> theta, std::span<const double> center,
                                         const ScoreLaw& law, std::size_t first, std::uint64_t n_draws, Seed seed);

}  // namespace serial

namespace detail {

inline double kde_at(std::span<const double> samples, double bandwidth, Kernel kernel, double u) {
  double sum = 0.0;
  for (double x : samples) sum += kernel_value(kernel, (x - u) / bandwidth);
  return sum / (static_cast<double>(samples.size()) * bandwidth);
}

inline double covariance_entry(const Matrix& c, Eigen::Index s, Eigen::Index t) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) sum += c(i, s) * c(i, t);
  return sum / static_cast<double>(c.rows());
}

/// Fills out[begin, end) for one chunk.
void fill_chunk(std::span<const double> theta, std::span<const double> center, const ScoreLaw& law,
                std::size_t first, std::uint64_t chunk, std::uint64_t begin, std::uint64_t end, Seed seed,
                double* out);

}  // namespace detail

}  // namespace fdens::kernels
