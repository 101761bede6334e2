#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fdens/error.hpp"
#include "fdens/fpca.hpp"
#include "fdens/simulation.hpp"
#include "support.hpp"

using namespace fdens;

namespace {

Matrix analytic_covariance(const Grid& g, std::size_t J) {
  const auto psi = cosine_basis(g, J);
  Matrix cov = Matrix::Zero(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < J; ++j) cov += std::pow(j + 1.0, -3.0) * psi[j].values() * psi[j].values().transpose();
  return cov;
}

}  // namespace

TEST_CASE("estimate_covariance examples") {
  const Grid g = Grid::uniform(0, 1, 31);
  const Curve h = Curve::from_function(g, [](double t) { return 1 + t * t; });
  const Matrix k = estimate_covariance(FunctionalSample({h, h * -1.0}));
  CHECK((k - h.values() * h.values().transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(estimate_covariance(FunctionalSample({h, h, h})).cwiseAbs().maxCoeff() < 1e-30);
  CHECK_THROWS_AS(estimate_covariance(FunctionalSample({h})), NumericError);
}

TEST_CASE("estimate_covariance matches the generator's covariance (model iii)") {
  const auto gen = generate_sample({SimModel::iii, 1000, 51, 10, 17});
  const Matrix k = estimate_covariance(gen.sample);
  const auto pts = gen.sample.grid().points();
  double worst = 0;
  for (std::size_t s = 0; s < pts.size(); ++s)
    for (std::size_t t = 0; t < pts.size(); ++t) {
      double truth = 0;
      for (int j = 1; j <= 10; ++j)
        truth += std::pow(j, -3.0) * 2 * std::cos(std::numbers::pi * j * pts[s]) * std::cos(std::numbers::pi * j * pts[t]);
      worst = std::max(worst, std::abs(k(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) - truth));
    }
  CHECK(worst < 0.1);
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(fdens::testing::jacobi_eigenvalues(k).back() > -1e-10);
}

TEST_CASE("decompose: rank one") {
  const Grid g = Grid::uniform(0, 1, 101);
  // integral of (2 sqrt2 cos(pi t))^2 = 4
  const Curve h = Curve::from_function(g, [](double t) { return 2 * std::numbers::sqrt2 * std::cos(std::numbers::pi * t); });
  const FpcaModel m = decompose(h.values() * h.values().transpose(), g, 3);
  CHECK(m.eigenvalues[0] == doctest::Approx(inner_product(h, h) * inner_product(h, h) / inner_product(h, h)));
  CHECK(m.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(std::abs(std::abs(inner_product(m.eigenfunctions[0], h)) - 2.0) < 1e-9);
  CHECK(m.eigenvalues[1] < 1e-12);
  CHECK(m.active_components() == 1);
}

TEST_CASE("decompose: zero matrix and errors") {
  const Grid g = Grid::uniform(0, 1, 11);
  const FpcaModel m = decompose(Matrix::Zero(11, 11), g, 4);
  for (double v : m.eigenvalues) CHECK(v == 0.0);
  CHECK(m.active_components() == 0);

  Matrix asym = Matrix::Identity(11, 11);
  asym(0, 1) = 1e-3;
  CHECK_THROWS_AS(decompose(asym, g, 2), InputError);
  CHECK_THROWS_AS(decompose(Matrix::Identity(11, 11), g, 12), InputError);
}

TEST_CASE("decompose: analytic eigenpairs, orthonormality, reconstruction") {
  const Grid g = Grid::uniform(0, 1, 201);
  const Matrix cov = analytic_covariance(g, 5);
  const FpcaModel m = decompose(cov, g, 5);
  const auto psi = cosine_basis(g, 5);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(std::abs(m.eigenvalues[j] - std::pow(j + 1.0, -3.0)) < 1e-3);
    CHECK(std::abs(inner_product(m.eigenfunctions[j], psi[j])) > 0.999);
    for (std::size_t k = 0; k < 5; ++k)
      CHECK(std::abs(inner_product(m.eigenfunctions[j], m.eigenfunctions[k]) - (j == k)) < 1e-8);
  }
  // Independent Jacobi oracle on the weight-symmetrised matrix.
  const Vector rw = g.weight_vector().cwiseSqrt();
  const auto jac = fdens::testing::jacobi_eigenvalues(rw.asDiagonal() * cov * rw.asDiagonal());
  for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(jac[j] - m.eigenvalues[j]) < 1e-12);

  Matrix recon = Matrix::Zero(201, 201);
  for (std::size_t j = 0; j < 5; ++j)
    recon += m.eigenvalues[j] * m.eigenfunctions[j].values() * m.eigenfunctions[j].values().transpose();
  const Matrix target = rw.asDiagonal() * cov * rw.asDiagonal();
  const Matrix got = rw.asDiagonal() * recon * rw.asDiagonal();
  CHECK((got - target).norm() / target.norm() < 1e-6);
}

TEST_CASE("sign convention") {
  const Grid g = Grid::uniform(0, 1, 101);
  Vector v = -Vector::Ones(101);
  apply_sign_convention(v, g.weight_vector());
  CHECK(v[0] == 1.0);
  // Integral ~ 0: largest |entry| made positive.
  Vector odd = Curve::from_function(g, [](double t) { return -(t - 0.5) - 0.3 * (t > 0.95); }).values();
  odd -= Vector::Constant(101, g.weight_vector().dot(odd));  // zero integral
  apply_sign_convention(odd, g.weight_vector());
  Eigen::Index at;
  odd.cwiseAbs().maxCoeff(&at);
  CHECK(odd[at] > 0);
  Vector again = odd;
  apply_sign_convention(again, g.weight_vector());
  CHECK(again == odd);
}

TEST_CASE("project_scores and training-score invariants") {
  const auto gen = generate_sample({SimModel::iv, 400, 101, 10, 3});
  const FpcaModel m = fit_fpca(gen.sample, 6);
  REQUIRE(m.components() == 6);
  for (Eigen::Index j = 0; j < m.scores.cols(); ++j) {
    const auto col = m.scores.col(j);
    CHECK(std::abs(col.mean()) < 1e-8);
    CHECK(std::abs(col.squaredNorm() / static_cast<double>(col.size()) - 1.0) < 1e-6);
  }
  const auto at_mean = project_scores(m, m.mean);
  for (const auto& s : at_mean) CHECK(std::abs(*s) < 1e-12);

  const Curve x1 = m.mean + m.eigenfunctions[0] * std::sqrt(m.eigenvalues[0]);
  const auto s1 = project_scores(m, x1);
  CHECK(std::abs(*s1[0] - 1.0) < 1e-9);
  for (std::size_t j = 1; j < s1.size(); ++j) CHECK(std::abs(*s1[j]) < 1e-9);

  const Curve x2 = m.mean - m.eigenfunctions[1] * (2 * std::sqrt(m.eigenvalues[1]));
  const auto s2 = project_scores(m, x2);
  CHECK(std::abs(*s2[1] + 2.0) < 1e-9);
  CHECK(std::abs(*s2[0]) < 1e-9);

  // Training curve projections agree with the stored score matrix.
  const auto s3 = project_active_scores(m, gen.sample.curve(7), 6);
  for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(s3[j] - m.scores(7, static_cast<Eigen::Index>(j))) < 1e-9);

  CHECK_THROWS_AS(project_scores(m, Curve::zero(Grid::uniform(0, 1, 7))), InputError);
}

TEST_CASE("null components are absent, not zero") {
  const Grid g = Grid::uniform(0, 1, 51);
  const Curve h = Curve::from_function(g, [](double t) { return t; });
  FpcaModel m = decompose(h.values() * h.values().transpose(), g, 3);
  const auto s = project_scores(m, h);
  CHECK(s[0].has_value());
  CHECK_FALSE(s[1].has_value());
  CHECK_THROWS_AS(project_active_scores(m, h, 2), NumericError);
}

TEST_CASE("variance_explained") {
  const Grid g = Grid::uniform(0, 1, 11);
  FpcaModel m{g, Curve::zero(g), {3.0, 1.0}, {Curve::zero(g), Curve::zero(g)}, Matrix()};
  CHECK(variance_explained(m, 1) == 0.75);
  CHECK(variance_explained(m, 2) == 1.0);
  CHECK_THROWS_AS(variance_explained(m, 0), InputError);
  CHECK_THROWS_AS(variance_explained(m, 3), InputError);
  m.eigenvalues = {0.0, 0.0};
  CHECK_THROWS_AS(variance_explained(m, 1), NumericError);

  m.eigenvalues = model_eigenvalues(SimModel::iii, 10);
  m.eigenfunctions.assign(10, Curve::zero(g));
  double total = 0;
  for (int j = 1; j <= 10; ++j) total += std::pow(j, -3.0);
  CHECK(variance_explained(m, 1) == doctest::Approx(1.0 / total));
  // 0.8319 would be 1 / zeta(3), the untruncated sum; ten terms give 0.8350.
  CHECK(variance_explained(m, 1) == doctest::Approx(0.8350).epsilon(1e-4));
  double prev = 0;
  for (std::size_t j = 1; j <= 10; ++j) {
    CHECK(variance_explained(m, j) >= prev);
    prev = variance_explained(m, j);
  }
  CHECK(prev == doctest::Approx(1.0));
}

TEST_CASE("fit_fpca is deterministic and rejects degenerate input") {
  const auto gen = generate_sample({SimModel::i, 80, 41, 10, 9});
  const FpcaModel a = fit_fpca(gen.sample, 5), b = fit_fpca(gen.sample, 5);
  CHECK(a.scores == b.scores);
  CHECK(a.eigenvalues == b.eigenvalues);
  const Curve c = gen.sample.curve(0);
  CHECK_THROWS_AS(fit_fpca(FunctionalSample({c, c}), 2), NumericError);
  CHECK_THROWS_AS(fit_fpca(gen.sample, 0), InputError);
}
