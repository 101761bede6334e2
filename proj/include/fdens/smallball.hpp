#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdens/rng.hpp"
#include "fdens/score_law.hpp"

namespace fdens {

/// Eigenvalue sequence truncated at j_max terms.
class EigenDecaySpec {
 public:
  enum class Kind { power, geometric, gaussian_like, explicit_list };

  /// theta_j = j^-a, a > 1.
  static EigenDecaySpec power(double a, std::size_t j_max = 200);
  /// theta_j = rho^j, 0 < rho < 1.
  static EigenDecaySpec geometric(double rho, std::size_t j_max = 200);
  /// theta_j = exp(-c j^2); j_max is cut where theta_j would underflow below 1e-300.
  static EigenDecaySpec gaussian_like(double c, std::size_t j_max = 200);
  /// Positive, non-increasing values.
  static EigenDecaySpec explicit_list(std::vector<double> theta);
  /// "power:<a>", "geometric:<rho>", "gaussian:<c>" or "list:<t1>,<t2>,...".
  static EigenDecaySpec parse(const std::string& text, std::size_t j_max = 200);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  std::size_t j_max() const { return theta_.size(); }
  std::span<const double> theta() const { return theta_; }
  /// 1-based.
  double theta(std::size_t j) const { return theta_.at(j - 1); }
  /// Upper bound on sum_{j > j_max} theta_j from the closed form (0 for explicit lists).
  double truncation_remainder() const;
  std::string describe() const;

 private:
  EigenDecaySpec(Kind kind, double parameter, std::vector<double> theta);
  Kind kind_;
  double parameter_;
  std::vector<double> theta_;
};

enum class DecayRegime { superexponential, exponential, neither };
std::string regime_name(DecayRegime regime);

/// Random function sum_j theta_j^{1/2} X_j psi_j with i.i.d. scores X_j ~ law, and the
/// scores x_j of the fixed centre function (zero beyond center.size()).
struct ProcessSpec {
  EigenDecaySpec decay;
  ScoreLaw law = ScoreLaw::gaussian();
  std::vector<double> center;

  double center_score(std::size_t j) const { return j <= center.size() ? center[j - 1] : 0.0; }
  /// f_j(x_j) for j = 1..r.
  std::vector<double> densities_at_center(std::size_t r) const;
};

struct ProbabilityEstimate {
  double p = 0.0;
  /// Wilson 95% interval.
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  /// Set when no draw hit the ball.
  bool low_count = false;
};

ProbabilityEstimate wilson_interval(std::uint64_t hits, std::uint64_t trials);

/// pi^{r/2} / Gamma(r/2 + 1).
double unit_ball_volume(std::size_t r);
double log_unit_ball_volume(std::size_t r);

/// Fraction of n_mc draws with sum_j theta_j (X_j - x_j)^2 <= h^2.
ProbabilityEstimate small_ball_mc(const ProcessSpec& spec, double radius, std::uint64_t n_mc, Seed seed);

/// n_mc draws of S = h^-2 sum_{j > r} theta_j (X_j - x_j)^2.
std::vector<double> tail_distribution_mc(const ProcessSpec& spec, double radius, std::size_t r, std::uint64_t n_mc,
                                         Seed seed);

/// Monte Carlo estimate of integral_0^1 (1 - t)^{r/2} dG(t): the mean of
/// (1 - S)^{r/2} 1{S <= 1}, summed in sample order.
double tail_integral(std::span<const double> tail_sample, std::size_t r);

/// log q(h) = r log(h pi^{1/2}) - log Gamma(r/2 + 1) + sum_{j<=r} (-1/2 log theta_j + log f_j(x_j))
///            + log tail_integral. Returns -inf when the tail integral is zero.
double log_q_approx(const ProcessSpec& spec, double radius, std::size_t r, std::span<const double> densities_at_center,
                    std::span<const double> tail_sample);
double q_approx(const ProcessSpec& spec, double radius, std::size_t r, std::span<const double> densities_at_center,
                std::span<const double> tail_sample);

/// Ratios theta_{k+1}/theta_k and tail ratios theta_k^-1 sum_{j>k} theta_j for k <= k_probe.
DecayRegime classify_decay(const EigenDecaySpec& decay, std::size_t k_probe);

/// c_s for the superexponential snapping rule; default ln(1 + s).
using SnapSequence = std::function<double(std::size_t)>;

/// Exponential: largest j with theta_j^-1 h^2 <= lambda^2. Superexponential: smallest s with
/// |log(h^2/theta_s)| <= c_s, else the r with theta_{r+1} < h^2 < theta_r.
std::size_t effective_dimension(const EigenDecaySpec& decay, double radius, DecayRegime regime, double lambda,
                                const SnapSequence& snap = {});

/// Index j minimising |log(h^2 / theta_j)|, the rule of thumb h^2 ~ theta_r.
std::size_t heuristic_dimension(const EigenDecaySpec& decay, double radius);

struct LeadingOrder {
  double value = 0.0;
  /// log of (h pi^{1/2})^r / Gamma(r/2 + 1) prod theta_j^{-1/2} f_j(x_j)
  double log_value = 0.0;
  /// 1/2 r {log(2 pi e h^2) - log r} + sum (Theta_j + phi_j); differs from log_value by
  /// the Stirling remainder of log Gamma(r/2 + 1).
  double log_stirling_form = 0.0;
};

LeadingOrder asymptotic_approx(const ProcessSpec& spec, double radius, std::size_t r,
                               std::span<const double> densities_at_center);

struct SmallBallReport {
  double radius = 0.0;
  std::size_t r = 0;
  DecayRegime regime = DecayRegime::exponential;
  ProbabilityEstimate p_mc;
  double q_hat = 0.0;
  double leading = 0.0;
  /// log(p_mc / q_hat)
  double log_ratio = 0.0;
  /// |log_ratio| / r
  double per_dim_error = 0.0;
  /// Fewer than 200 hits.
  bool unreliable = false;
  /// Truncated eigenvalue mass below 1e-9 h^2.
  bool truncation_ok = true;
};

inline constexpr std::uint64_t kMinReliableHits = 200;

struct ValidationOptions {
  /// Classified with classify_decay when absent.
  std::optional<DecayRegime> regime;
  /// Tail sample size; n_mc when zero.
  std::uint64_t n_tail = 0;
  SnapSequence snap;
};

/// For each radius: effective dimension, MC probability (substream 2k of seed), tail sample
/// (substream 2k+1), q and leading-order approximations.
std::vector<SmallBallReport> validate_approximation(const ProcessSpec& spec, const std::vector<double>& radii,
                                                    double lambda, std::uint64_t n_mc, Seed seed,
                                                    const ValidationOptions& options = {});

}  // namespace fdens
