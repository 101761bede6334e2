#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fdens/error.hpp"
#include "fdens/smallball.hpp"
#include "support.hpp"

using namespace fdens;

namespace {

const double kPhi0 = 1.0 / std::sqrt(2 * std::numbers::pi);

ProcessSpec gaussian_process(EigenDecaySpec d, std::vector<double> center = {}) {
  return ProcessSpec{std::move(d), ScoreLaw::gaussian(), std::move(center)};
}

}  // namespace

TEST_CASE("decay specs") {
  const auto g = EigenDecaySpec::geometric(0.5, 30);
  CHECK(g.j_max() == 30);
  CHECK(g.theta(3) == 0.125);
  CHECK(g.truncation_remainder() == doctest::Approx(std::pow(0.5, 30)));
  CHECK(EigenDecaySpec::power(3.0).theta(2) == doctest::Approx(0.125));
  CHECK(EigenDecaySpec::gaussian_like(1.0).theta(2) == doctest::Approx(std::exp(-4.0)));
  CHECK(EigenDecaySpec::gaussian_like(1.0).j_max() < 200);
  CHECK(EigenDecaySpec::parse("geometric:0.25", 10).theta(1) == 0.25);
  CHECK(EigenDecaySpec::parse("list:1,0.5,0.1").j_max() == 3);
  CHECK_THROWS_AS(EigenDecaySpec::parse("cubic:2"), InputError);
  CHECK_THROWS_AS(EigenDecaySpec::power(1.0), InputError);
  CHECK_THROWS_AS(EigenDecaySpec::geometric(1.0), InputError);
  CHECK_THROWS_AS(EigenDecaySpec::explicit_list({1.0, 2.0}), InputError);
  CHECK_THROWS_AS(EigenDecaySpec::explicit_list({1.0, -1.0}), InputError);
}

TEST_CASE("score laws have unit variance") {
  for (const auto& law : {ScoreLaw::gaussian(), ScoreLaw::uniform(), ScoreLaw::chi_square(8)}) {
    Engine eng = make_engine(5, 0);
    ScoreSampler draw(law);
    double s1 = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = draw(eng);
      s1 += x;
      s2 += x * x;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
  }
  CHECK(ScoreLaw::gaussian().density(0) == doctest::Approx(kPhi0));
  CHECK(ScoreLaw::uniform().density(0) == doctest::Approx(1 / (2 * std::numbers::sqrt3)));
  CHECK(ScoreLaw::parse("chisq:4").df() == 4.0);
  CHECK_THROWS_AS(ScoreLaw::parse("cauchy"), InputError);
}

TEST_CASE("unit ball volume") {
  CHECK(unit_ball_volume(1) == 2.0);
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * std::numbers::pi / 3));
  CHECK(unit_ball_volume(0) == doctest::Approx(1.0));
}

TEST_CASE("wilson interval") {
  const auto w = wilson_interval(30, 100);
  CHECK(w.p == 0.3);
  CHECK(w.lower < 0.3);
  CHECK(w.upper > 0.3);
  const auto z = wilson_interval(0, 1000);
  CHECK(z.p == 0.0);
  CHECK(z.lower == 0.0);
  CHECK(z.upper > 0.0);
  CHECK(z.low_count);
}

TEST_CASE("small_ball_mc examples") {
  const auto one = gaussian_process(EigenDecaySpec::explicit_list({1.0}));
  const auto p = small_ball_mc(one, 1.0, 400000, 3);
  const double truth = 2 * fdens::testing::normal_cdf(1.0) - 1;
  CHECK(std::abs(p.p - truth) < 0.005);
  CHECK(p.lower <= truth);
  CHECK(p.upper >= truth);
  CHECK(small_ball_mc(one, 100.0, 1000, 3).p == 1.0);
  CHECK(small_ball_mc(one, 0.0, 1000, 3).p == 0.0);
  CHECK_THROWS_AS(small_ball_mc(one, 1.0, 0, 3), InputError);
  CHECK_THROWS_AS(small_ball_mc(one, -1.0, 10, 3), InputError);
}

TEST_CASE("small_ball_mc monotone in h and scale covariant") {
  const auto spec = gaussian_process(EigenDecaySpec::geometric(0.5, 20));
  double prev = 0;
  for (double h : {0.1, 0.2, 0.3, 0.5, 0.8}) {
    const double p = small_ball_mc(spec, h, 50000, 9).p;
    CHECK(p >= prev);
    prev = p;
  }
  std::vector<double> scaled;
  for (double t : spec.decay.theta()) scaled.push_back(4 * t);
  const auto big = gaussian_process(EigenDecaySpec::explicit_list(scaled));
  CHECK(small_ball_mc(spec, 0.3, 50000, 9).hits == small_ball_mc(big, 0.6, 50000, 9).hits);
  CHECK(effective_dimension(spec.decay, 0.3, DecayRegime::exponential, 3) ==
        effective_dimension(big.decay, 0.6, DecayRegime::exponential, 3));
}

TEST_CASE("tail distribution") {
  const auto tiny = gaussian_process(EigenDecaySpec::explicit_list({1.0, 0.5, 1e-12}));
  const auto s = tail_distribution_mc(tiny, 1.0, 2, 1000, 1);
  CHECK(*std::max_element(s.begin(), s.end()) < 1e-9);
  CHECK_THROWS_AS(tail_distribution_mc(tiny, 1.0, 3, 10, 1), InputError);

  const auto spec = gaussian_process(EigenDecaySpec::geometric(0.5, 40));
  const auto a = tail_distribution_mc(spec, 0.25, 3, 5000, 2);
  const auto b = tail_distribution_mc(spec, 0.5, 3, 5000, 2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == a[i] / 4);

  // E S = h^-2 sum_{j>r} theta_j <= C1 lambda^-2 (1 + C2) with C1 = 1, C2 = 1.
  const double lambda = 3, h = std::sqrt(0.75 * lambda * lambda * spec.decay.theta(4));
  const auto r = effective_dimension(spec.decay, h, DecayRegime::exponential, lambda);
  CHECK(r == 4);
  const auto t = tail_distribution_mc(spec, h, r, 200000, 4);
  double mean = 0;
  for (double x : t) mean += x / static_cast<double>(t.size());
  CHECK(mean <= 2.0 / 9.0);

  const double gi = tail_integral(t, r);
  CHECK(gi >= 0.0);
  CHECK(gi <= 1.0);
  CHECK(tail_integral(std::vector<double>(10, 0.0), 3) == 1.0);
  CHECK(tail_integral(std::vector<double>(10, 1.5), 3) == 0.0);
}

TEST_CASE("q_approx examples") {
  const auto spec = gaussian_process(EigenDecaySpec::explicit_list({1.0, 0.5}));
  const std::vector<double> f{kPhi0};
  const std::vector<double> zero{0.0};
  CHECK(q_approx(spec, 0.2, 1, f, zero) == doctest::Approx(2 * 0.2 * kPhi0).epsilon(1e-12));
  CHECK(q_approx(spec, 0.2, 1, f, std::vector<double>{1.5, 2.0}) == 0.0);
  CHECK_THROWS_AS(q_approx(spec, 0.2, 1, std::vector<double>{0.0}, zero), InputError);

  const auto lo = asymptotic_approx(spec, 0.2, 1, f);
  CHECK(lo.value == q_approx(spec, 0.2, 1, f, zero));
  // Strictly increasing in f_j(x_j).
  CHECK(q_approx(spec, 0.2, 1, std::vector<double>{0.5}, zero) > q_approx(spec, 0.2, 1, f, zero));
  CHECK(asymptotic_approx(spec, 0.2, 1, std::vector<double>{0.5}).value > lo.value);
}

TEST_CASE("q_approx agrees with Monte Carlo at r = 4") {
  // Within a factor 1.5 needs a small ellipsoid in the leading r directions; at lambda = 3
  // the ratio is about 2 because the density is far from flat over the ball.
  const auto spec = gaussian_process(EigenDecaySpec::geometric(0.5, 15));
  const double lambda = 1.5;
  const double h = lambda * std::pow(spec.decay.theta(4) * spec.decay.theta(5), 0.25);
  const auto r = effective_dimension(spec.decay, h, DecayRegime::exponential, lambda);
  REQUIRE(r == 4);
  const auto p = small_ball_mc(spec, h, 2000000, 31);
  const auto tail = tail_distribution_mc(spec, h, r, 200000, 32);
  const double q = q_approx(spec, h, r, spec.densities_at_center(r), tail);
  CHECK(q / p.p < 1.5);
  CHECK(p.p / q < 1.5);
}

TEST_CASE("classify_decay") {
  CHECK(classify_decay(EigenDecaySpec::gaussian_like(1.0), 8) == DecayRegime::superexponential);
  CHECK(classify_decay(EigenDecaySpec::geometric(0.5), 40) == DecayRegime::exponential);
  CHECK(classify_decay(EigenDecaySpec::power(3.0), 40) == DecayRegime::neither);
  CHECK_THROWS_AS(classify_decay(EigenDecaySpec::geometric(0.5), 2), InputError);
}

TEST_CASE("effective_dimension examples") {
  const double lambda = 3;
  CHECK(effective_dimension(EigenDecaySpec::geometric(0.25), std::sqrt(std::pow(4.0, -5) * lambda * lambda),
                            DecayRegime::exponential, lambda) == 5);
  const auto sup = EigenDecaySpec::gaussian_like(1.0);
  CHECK(effective_dimension(sup, std::sqrt(sup.theta(3)), DecayRegime::superexponential, lambda) == 3);
  // Between theta_4 and theta_3 but far from both on the log scale: the bracket rule.
  CHECK(effective_dimension(sup, std::exp(-6.0), DecayRegime::superexponential, lambda,
                            [](std::size_t) { return 0.1; }) == 3);

  const auto half = EigenDecaySpec::geometric(0.5);
  const double h = std::sqrt(1.5 * std::pow(2.0, -7));
  CHECK(effective_dimension(half, h, DecayRegime::exponential, 1.0) == 6);
  CHECK(effective_dimension(half, h, DecayRegime::exponential, std::numbers::sqrt2) == 7);
  CHECK_THROWS_AS(effective_dimension(half, 10.0, DecayRegime::exponential, 1.0), InputError);
  CHECK_THROWS_AS(effective_dimension(half, 0.1, DecayRegime::neither, 1.0), InputError);

  CHECK(heuristic_dimension(half, std::sqrt(half.theta(5))) == 5);
}

TEST_CASE("leading-order approximation") {
  const auto spec = gaussian_process(EigenDecaySpec::explicit_list({1.0, 0.25}));
  const std::vector<double> f{kPhi0, kPhi0};
  const auto lo = asymptotic_approx(spec, 0.1, 2, f);
  // (h^2 pi / Gamma(2)) * (theta_1 theta_2)^{-1/2} * phi(0)^2
  const double direct = 0.01 * std::numbers::pi * 2.0 * kPhi0 * kPhi0;
  CHECK(lo.value == doctest::Approx(direct).epsilon(1e-12));
  CHECK(lo.value == doctest::Approx(0.01).epsilon(0.01));

  // The two forms differ by the Stirling remainder of log Gamma(r/2 + 1).
  const auto g = gaussian_process(EigenDecaySpec::geometric(0.5, 40));
  for (std::size_t r = 5; r <= 20; ++r) {
    const double h = 3 * std::sqrt(g.decay.theta(r));
    const auto a = asymptotic_approx(g, h, r, g.densities_at_center(r));
    const double rem = a.log_value - a.log_stirling_form + 0.5 * std::log(std::numbers::pi * static_cast<double>(r));
    CHECK(std::abs(rem) <= 1.0 / (6.0 * static_cast<double>(r)) + 0.01);
  }
}

TEST_CASE("validate_approximation") {
  const auto spec = gaussian_process(EigenDecaySpec::geometric(0.5, 40));
  CHECK(validate_approximation(spec, {}, 3, 1000, 1).empty());
  CHECK_THROWS_AS(validate_approximation(spec, {0.1, 0.2}, 3, 1000, 1), InputError);

  const double h = 3 * std::pow(spec.decay.theta(3) * spec.decay.theta(4), 0.25);
  const auto at_zero = validate_approximation(spec, {h}, 3, 200000, 5);
  const auto shifted = gaussian_process(EigenDecaySpec::geometric(0.5, 40), {2.0, 2.0, 2.0});
  const auto at_two = validate_approximation(shifted, {h}, 3, 200000, 5);
  REQUIRE(at_zero.size() == 1);
  CHECK(at_zero[0].r == 3);
  CHECK(at_zero[0].regime == DecayRegime::exponential);
  CHECK(at_two[0].p_mc.p < at_zero[0].p_mc.p);
  double l0 = 0, l2 = 0;
  for (double f : spec.densities_at_center(3)) l0 += std::log(f);
  for (double f : shifted.densities_at_center(3)) l2 += std::log(f);
  CHECK(l2 < l0);
  CHECK(at_zero[0].p_mc.lower <= at_zero[0].p_mc.p);
  CHECK(at_zero[0].p_mc.upper >= at_zero[0].p_mc.p);
  CHECK(at_zero[0].per_dim_error == doctest::Approx(std::abs(at_zero[0].log_ratio) / 3));
}
