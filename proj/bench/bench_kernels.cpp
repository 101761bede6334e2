// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "fdens/kernels.hpp"

namespace {

using namespace fdens;

Matrix random_matrix(Eigen::Index n, Eigen::Index m) {
  std::mt19937_64 eng(1);
  std::normal_distribution<double> nd;
  Matrix c(n, m);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = nd(eng);
  return c;
}

std::vector<double> draws(std::size_t n) {
  std::mt19937_64 eng(2);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (auto& x : v) x = nd(eng);
  return v;
}

std::vector<double> scan_points(std::size_t k) {
  std::vector<double> p(k);
  for (std::size_t i = 0; i < k; ++i) p[i] = -4.0 + 8.0 * static_cast<double>(i) / static_cast<double>(k - 1);
  return p;
}

const std::vector<double> kTheta = [] {
  std::vector<double> t(15);
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = std::ldexp(1.0, -static_cast<int>(j + 1));
  return t;
}();

template <bool Parallel>
void BM_covariance(benchmark::State& state) {
  const Matrix c = random_matrix(state.range(0), 201);
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? kernels::covariance(c) : kernels::serial::covariance(c));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 201 * 201);
}

template <bool Parallel>
void BM_kde_values(benchmark::State& state) {
  const auto samples = draws(static_cast<std::size_t>(state.range(0)));
  const auto points = scan_points(512);
  for (auto _ : state) {
    auto v = Parallel ? kernels::kde_values(samples, 0.2, Kernel::gaussian, points)
                      : kernels::serial::kde_values(samples, 0.2, Kernel::gaussian, points);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 512);
}

template <bool Parallel>
void BM_weighted_square_sums(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const ScoreLaw law = ScoreLaw::gaussian();
  for (auto _ : state) {
    auto v = Parallel ? kernels::weighted_square_sums(kTheta, {}, law, 0, n, 7)
                      : kernels::serial::weighted_square_sums(kTheta, {}, law, 0, n, 7);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_covariance<false>)->Name("covariance/serial")->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_covariance<true>)->Name("covariance/openmp")->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_kde_values<false>)->Name("kde_values/serial")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kde_values<true>)->Name("kde_values/openmp")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_weighted_square_sums<false>)->Name("weighted_square_sums/serial")->Arg(1 << 18)->Arg(1 << 21)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weighted_square_sums<true>)->Name("weighted_square_sums/openmp")->Arg(1 << 18)->Arg(1 << 21)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
