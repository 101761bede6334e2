#include "fdens/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fdens/error.hpp"
#include "fdens/kernels.hpp"

namespace fdens {

// ---- score laws ------------------------------------------------------------

ScoreLaw ScoreLaw::chi_square(double df) {
  if (!(df > 0.0)) throw InputError("chi-square degrees of freedom must be positive");
  return ScoreLaw(Kind::chi_square, df);
}

ScoreLaw ScoreLaw::parse(const std::string& name) {
  if (name == "gaussian" || name == "normal") return gaussian();
  if (name == "uniform") return uniform();
  if (name.rfind("chisq:", 0) == 0) {
    try {
      return chi_square(std::stod(name.substr(6)));
    } catch (const std::logic_error&) {
      throw InputError("bad chi-square degrees of freedom in '" + name + "'");
    }
  }
  throw InputError("unknown score law '" + name + "' (expected gaussian, uniform or chisq:<df>)");
}

std::string ScoreLaw::name() const {
  switch (kind_) {
    case Kind::gaussian: return "gaussian";
    case Kind::uniform: return "uniform";
    case Kind::chi_square: {
      std::ostringstream os;
      os << "chisq:" << df_;
      return os.str();
    }
  }
  return "?";
}

double ScoreLaw::log_density(double u) const {
  switch (kind_) {
    case Kind::gaussian: return -0.5 * u * u - 0.5 * std::log(2.0 * std::numbers::pi);
    case Kind::uniform:
      return std::abs(u) <= std::numbers::sqrt3 ? -std::log(2.0 * std::numbers::sqrt3)
                                                : -std::numeric_limits<double>::infinity();
    case Kind::chi_square: {
      const double s = std::sqrt(2.0 * df_);
      const double y = df_ + s * u;
      if (y <= 0.0) return -std::numeric_limits<double>::infinity();
      const double k = 0.5 * df_;
      return std::log(s) + (k - 1.0) * std::log(y) - 0.5 * y - k * std::log(2.0) - std::lgamma(k);
    }
  }
  return 0.0;
}

// ---- eigenvalue sequences --------------------------------------------------

EigenDecaySpec::EigenDecaySpec(Kind kind, double parameter, std::vector<double> theta)
    : kind_(kind), parameter_(parameter), theta_(std::move(theta)) {
  if (theta_.empty()) throw InputError("eigenvalue sequence is empty");
  for (std::size_t j = 0; j < theta_.size(); ++j) {
    if (!(theta_[j] > 0.0) || !std::isfinite(theta_[j]))
      throw InputError("eigenvalue " + std::to_string(j + 1) + " must be positive and finite");
    if (j > 0 && theta_[j] > theta_[j - 1]) throw InputError("eigenvalues must be non-increasing");
  }
}

EigenDecaySpec EigenDecaySpec::power(double a, std::size_t j_max) {
  if (!(a > 1.0)) throw InputError("power decay needs exponent > 1 for a summable sequence");
  if (j_max < 1) throw InputError("j_max must be at least 1");
  std::vector<double> t(j_max);
  for (std::size_t j = 0; j < j_max; ++j) t[j] = std::pow(static_cast<double>(j + 1), -a);
  return EigenDecaySpec(Kind::power, a, std::move(t));
}

EigenDecaySpec EigenDecaySpec::geometric(double rho, std::size_t j_max) {
  if (!(rho > 0.0 && rho < 1.0)) throw InputError("geometric decay needs 0 < rho < 1");
  if (j_max < 1) throw InputError("j_max must be at least 1");
  std::vector<double> t(j_max);
  for (std::size_t j = 0; j < j_max; ++j) t[j] = std::pow(rho, static_cast<double>(j + 1));
  return EigenDecaySpec(Kind::geometric, rho, std::move(t));
}

EigenDecaySpec EigenDecaySpec::gaussian_like(double c, std::size_t j_max) {
  if (!(c > 0.0)) throw InputError("gaussian-like decay needs c > 0");
  std::vector<double> t;
  for (std::size_t j = 1; j <= j_max; ++j) {
    const double log_theta = -c * static_cast<double>(j * j);
    if (log_theta < std::log(1e-300)) break;
    t.push_back(std::exp(log_theta));
  }
  return EigenDecaySpec(Kind::gaussian_like, c, std::move(t));
}

EigenDecaySpec EigenDecaySpec::explicit_list(std::vector<double> theta) {
  return EigenDecaySpec(Kind::explicit_list, 0.0, std::move(theta));
}

EigenDecaySpec EigenDecaySpec::parse(const std::string& text, std::size_t j_max) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("decay spec '" + text + "' must look like kind:value");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  try {
    if (kind == "power") return power(std::stod(rest), j_max);
    if (kind == "geometric") return geometric(std::stod(rest), j_max);
    if (kind == "gaussian") return gaussian_like(std::stod(rest), j_max);
    if (kind == "list") {
      std::vector<double> values;
      std::stringstream ss(rest);
      std::string item;
      while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
      return explicit_list(std::move(values));
    }
  } catch (const std::logic_error&) {
    throw InputError("cannot parse numbers in decay spec '" + text + "'");
  }
  throw InputError("unknown decay kind '" + kind + "' (expected power, geometric, gaussian or list)");
}

double EigenDecaySpec::truncation_remainder() const {
  const auto J = static_cast<double>(theta_.size());
  switch (kind_) {
    case Kind::power: return std::pow(J, 1.0 - parameter_) / (parameter_ - 1.0);
    case Kind::geometric: return std::pow(parameter_, J + 1.0) / (1.0 - parameter_);
    case Kind::gaussian_like:
      return std::exp(-parameter_ * (J + 1.0) * (J + 1.0)) / (1.0 - std::exp(-parameter_ * (2.0 * J + 3.0)));
    case Kind::explicit_list: return 0.0;
  }
  return 0.0;
}

std::string EigenDecaySpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::power: os << "power:" << parameter_; break;
    case Kind::geometric: os << "geometric:" << parameter_; break;
    case Kind::gaussian_like: os << "gaussian:" << parameter_; break;
    case Kind::explicit_list: os << "list"; break;
  }
  os << " (j_max=" << theta_.size() << ")";
  return os.str();
}

std::string regime_name(DecayRegime regime) {
  switch (regime) {
    case DecayRegime::superexponential: return "superexponential";
    case DecayRegime::exponential: return "exponential";
    case DecayRegime::neither: return "neither";
  }
  return "?";
}

std::vector<double> ProcessSpec::densities_at_center(std::size_t r) const {
  std::vector<double> out(r);
  for (std::size_t j = 1; j <= r; ++j) out[j - 1] = law.density(center_score(j));
  return out;
}

// ---- Monte Carlo -----------------------------------------------------------

ProbabilityEstimate wilson_interval(std::uint64_t hits, std::uint64_t trials) {
  ProbabilityEstimate out;
  out.hits = hits;
  out.trials = trials;
  out.low_count = hits == 0;
  if (trials == 0) return out;
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  out.p = p;
  out.lower = std::max(0.0, centre - half);
  out.upper = std::min(1.0, centre + half);
  if (hits == 0) out.lower = 0.0;
  return out;
}

double log_unit_ball_volume(std::size_t r) {
  const double half = 0.5 * static_cast<double>(r);
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

double unit_ball_volume(std::size_t r) {
  switch (r) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: return std::exp(log_unit_ball_volume(r));
  }
}

namespace {

std::vector<double> center_vector(const ProcessSpec& spec) {
  std::vector<double> c(spec.decay.j_max(), 0.0);
  for (std::size_t j = 0; j < std::min(c.size(), spec.center.size()); ++j) c[j] = spec.center[j];
  return c;
}

}  // namespace

ProbabilityEstimate small_ball_mc(const ProcessSpec& spec, double radius, std::uint64_t n_mc, Seed seed) {
  if (!(radius >= 0.0)) throw InputError("small-ball radius must be non-negative");
  if (n_mc < 1) throw InputError("need at least one Monte Carlo draw");
  const auto sums = kernels::weighted_square_sums(spec.decay.theta(), center_vector(spec), spec.law, 0, n_mc, seed);
  const double h2 = radius * radius;
  std::uint64_t hits = 0;
  for (double s : sums) hits += s <= h2 ? 1 : 0;
  return wilson_interval(hits, n_mc);
}

std::vector<double> tail_distribution_mc(const ProcessSpec& spec, double radius, std::size_t r, std::uint64_t n_mc,
                                         Seed seed) {
  if (!(radius > 0.0)) throw InputError("small-ball radius must be positive");
  if (r >= spec.decay.j_max())
    throw InputError("tail is empty: r = " + std::to_string(r) + " but j_max = " + std::to_string(spec.decay.j_max()));
  auto sums = kernels::weighted_square_sums(spec.decay.theta(), center_vector(spec), spec.law, r, n_mc, seed);
  const double h2 = radius * radius;
  for (double& s : sums) s /= h2;
  return sums;
}

double tail_integral(std::span<const double> tail_sample, std::size_t r) {
  if (tail_sample.empty()) throw InputError("tail sample is empty");
  const double half = 0.5 * static_cast<double>(r);
  double sum = 0.0;
  for (double s : tail_sample)
    if (s <= 1.0) sum += std::pow(1.0 - s, half);
  return sum / static_cast<double>(tail_sample.size());
}

namespace {

double log_leading(const ProcessSpec& spec, double radius, std::size_t r, std::span<const double> densities) {
  if (r < 1) throw InputError("dimension r must be at least 1");
  if (!(radius > 0.0)) throw InputError("small-ball radius must be positive");
  if (r > spec.decay.j_max()) throw InputError("r exceeds the eigenvalue truncation");
  if (densities.size() < r) throw InputError("need a density value at the centre for each of the r components");
  double log_q = static_cast<double>(r) * std::log(radius * std::sqrt(std::numbers::pi)) -
                 std::lgamma(0.5 * static_cast<double>(r) + 1.0);
  for (std::size_t j = 0; j < r; ++j) {
    if (!(densities[j] > 0.0))
      throw InputError("density at the centre must be positive (component " + std::to_string(j + 1) + ")");
    log_q += -0.5 * std::log(spec.decay.theta()[j]) + std::log(densities[j]);
  }
  return log_q;
}

}  // namespace

double log_q_approx(const ProcessSpec& spec, double radius, std::size_t r, std::span<const double> densities_at_center,
                    std::span<const double> tail_sample) {
  const double lead = log_leading(spec, radius, r, densities_at_center);
  const double g = tail_integral(tail_sample, r);
  return g > 0.0 ? lead + std::log(g) : -std::numeric_limits<double>::infinity();
}

double q_approx(const ProcessSpec& spec, double radius, std::size_t r, std::span<const double> densities_at_center,
                std::span<const double> tail_sample) {
  return std::exp(log_q_approx(spec, radius, r, densities_at_center, tail_sample));
}

LeadingOrder asymptotic_approx(const ProcessSpec& spec, double radius, std::size_t r,
                               std::span<const double> densities_at_center) {
  LeadingOrder out;
  out.log_value = log_leading(spec, radius, r, densities_at_center);
  out.value = std::exp(out.log_value);
  const double rd = static_cast<double>(r);
  double sum = 0.0;
  for (std::size_t j = 0; j < r; ++j) sum += -0.5 * std::log(spec.decay.theta()[j]) + std::log(densities_at_center[j]);
  out.log_stirling_form =
      0.5 * rd * (std::log(2.0 * std::numbers::pi * std::numbers::e * radius * radius) - std::log(rd)) + sum;
  return out;
}

// ---- regimes and dimension -------------------------------------------------

DecayRegime classify_decay(const EigenDecaySpec& decay, std::size_t k_probe) {
  if (k_probe < 3) throw InputError("classify_decay needs at least 3 probes");
  if (k_probe >= decay.j_max()) throw InputError("k_probe must be below j_max");
  const auto theta = decay.theta();

  std::vector<double> ratio(k_probe), tail(k_probe);
  double suffix = decay.truncation_remainder();
  std::vector<double> suffix_after(theta.size() + 1, 0.0);
  suffix_after[theta.size()] = suffix;
  for (std::size_t j = theta.size(); j-- > 0;) suffix_after[j] = suffix_after[j + 1] + theta[j];
  for (std::size_t k = 1; k <= k_probe; ++k) {
    ratio[k - 1] = theta[k] / theta[k - 1];
    tail[k - 1] = suffix_after[k] / theta[k - 1];
  }

  bool monotone = true;
  for (std::size_t k = 1; k < k_probe; ++k)
    if (ratio[k] > ratio[k - 1]) monotone = false;
  if (monotone && ratio.back() < 0.05) return DecayRegime::superexponential;

  const std::size_t start = (2 * k_probe) / 3;
  const double last = tail.back();
  bool stable = std::isfinite(last);
  for (std::size_t k = start; k < k_probe; ++k)
    if (std::abs(tail[k] - last) > 0.1 * last) stable = false;
  return stable ? DecayRegime::exponential : DecayRegime::neither;
}

std::size_t effective_dimension(const EigenDecaySpec& decay, double radius, DecayRegime regime, double lambda,
                                const SnapSequence& snap) {
  if (!(radius > 0.0)) throw InputError("small-ball radius must be positive");
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  const auto theta = decay.theta();
  const double h2 = radius * radius;
  if (h2 > lambda * lambda * theta[0]) throw InputError("radius too large for dimension-1 resolution");

  switch (regime) {
    case DecayRegime::exponential: {
      std::size_t r = 0;
      for (std::size_t j = 0; j < theta.size(); ++j)
        if (h2 / theta[j] <= lambda * lambda) r = j + 1;
      return r;
    }
    case DecayRegime::superexponential: {
      for (std::size_t s = 1; s <= theta.size(); ++s) {
        const double c = snap ? snap(s) : std::log1p(static_cast<double>(s));
        if (std::abs(std::log(h2 / theta[s - 1])) <= c) return s;
      }
      if (h2 >= theta[0]) throw InputError("radius too large for dimension-1 resolution");
      for (std::size_t r = 1; r < theta.size(); ++r)
        if (theta[r] < h2 && h2 < theta[r - 1]) return r;
      return theta.size();
    }
    case DecayRegime::neither: break;
  }
  throw InputError("effective dimension is undefined for eigenvalues that decay neither exponentially nor faster");
}

std::size_t heuristic_dimension(const EigenDecaySpec& decay, double radius) {
  if (!(radius > 0.0)) throw InputError("small-ball radius must be positive");
  const auto theta = decay.theta();
  const double h2 = radius * radius;
  std::size_t best = 1;
  for (std::size_t j = 2; j <= theta.size(); ++j)
    if (std::abs(std::log(h2 / theta[j - 1])) < std::abs(std::log(h2 / theta[best - 1]))) best = j;
  return best;
}

std::vector<SmallBallReport> validate_approximation(const ProcessSpec& spec, const std::vector<double>& radii,
                                                    double lambda, std::uint64_t n_mc, Seed seed,
                                                    const ValidationOptions& options) {
  std::vector<SmallBallReport> out;
  if (radii.empty()) return out;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw InputError("radii must be positive");
    if (k > 0 && !(radii[k] < radii[k - 1])) throw InputError("radii must be strictly decreasing");
  }
  const DecayRegime regime =
      options.regime ? *options.regime
                     : classify_decay(spec.decay, std::min<std::size_t>(spec.decay.j_max() - 1, 30));
  const std::uint64_t n_tail = options.n_tail ? options.n_tail : n_mc;

  for (std::size_t k = 0; k < radii.size(); ++k) {
    SmallBallReport rep;
    rep.radius = radii[k];
    rep.regime = regime;
    rep.r = effective_dimension(spec.decay, rep.radius, regime, lambda, options.snap);
    rep.p_mc = small_ball_mc(spec, rep.radius, n_mc, substream_seed(seed, 2 * k));
    const auto dens = spec.densities_at_center(rep.r);
    std::vector<double> tail{0.0};
    if (rep.r < spec.decay.j_max()) tail = tail_distribution_mc(spec, rep.radius, rep.r, n_tail, substream_seed(seed, 2 * k + 1));
    const double log_q = log_q_approx(spec, rep.radius, rep.r, dens, tail);
    rep.q_hat = std::exp(log_q);
    rep.leading = asymptotic_approx(spec, rep.radius, rep.r, dens).value;
    rep.log_ratio = std::log(rep.p_mc.p) - log_q;
    rep.per_dim_error = std::abs(rep.log_ratio) / static_cast<double>(rep.r);
    rep.unreliable = rep.p_mc.hits < kMinReliableHits;
    rep.truncation_ok = spec.decay.truncation_remainder() < 1e-9 * rep.radius * rep.radius;
    out.push_back(rep);
  }
  return out;
}

}  // namespace fdens
