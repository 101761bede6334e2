#include "fdens/simulation.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <random>

#include "fdens/central.hpp"
#include "fdens/error.hpp"
#include "fdens/fpca.hpp"
#include "fdens/score_density.hpp"

namespace fdens {

namespace {

bool chi_square_model(SimModel m) { return m == SimModel::i || m == SimModel::ii; }

constexpr double kChiDf = 8.0;

}  // namespace

SimModel parse_sim_model(const std::string& name) {
  if (name == "i") return SimModel::i;
  if (name == "ii") return SimModel::ii;
  if (name == "iii") return SimModel::iii;
  if (name == "iv") return SimModel::iv;
  throw InputError("unknown simulation model '" + name + "' (expected i, ii, iii or iv)");
}

std::string sim_model_name(SimModel model) {
  switch (model) {
    case SimModel::i: return "i";
    case SimModel::ii: return "ii";
    case SimModel::iii: return "iii";
    case SimModel::iv: return "iv";
  }
  return "?";
}

std::string modal_estimator_name(ModalEstimator e) {
  return e == ModalEstimator::univariate ? "univariate" : "multivariate";
}

std::vector<double> model_eigenvalues(SimModel model, std::size_t J) {
  const double power = (model == SimModel::i || model == SimModel::iii) ? 3.0 : 2.0;
  std::vector<double> theta(J);
  for (std::size_t j = 0; j < J; ++j) theta[j] = std::pow(static_cast<double>(j + 1), -power);
  return theta;
}

std::vector<Curve> cosine_basis(const Grid& grid, std::size_t J) {
  std::vector<Curve> out;
  out.reserve(J);
  for (std::size_t j = 1; j <= J; ++j)
    out.push_back(Curve::from_function(grid, [j](double t) {
      return std::numbers::sqrt2 * std::cos(std::numbers::pi * static_cast<double>(j) * t);
    }));
  return out;
}

// E T^2 = 7/3 for T ~ U[1,2]; var V = 1 (normal) or 2 df = 16 (chi-square).
double mixing_constant(SimModel model) {
  const double var_v = chi_square_model(model) ? 2.0 * kChiDf : 1.0;
  return std::sqrt(3.0 / (7.0 * var_v));
}

GeneratedSample generate_sample(const SimScenario& sc) {
  if (sc.n < 1 || sc.m < 2 || sc.J < 1) throw InputError("scenario needs n >= 1, m >= 2, J >= 1");
  const Grid grid = Grid::uniform(0.0, 1.0, sc.m);
  const auto theta = model_eigenvalues(sc.model, sc.J);
  auto psi = cosine_basis(grid, sc.J);
  const double c = mixing_constant(sc.model);
  const bool chi = chi_square_model(sc.model);

  const auto n = static_cast<Eigen::Index>(sc.n);
  const auto J = static_cast<Eigen::Index>(sc.J);
  Matrix scores(n, J);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    Engine eng = make_engine(sc.seed, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> mixer(1.0, 2.0);
    std::normal_distribution<double> normal;
    std::chi_squared_distribution<double> chi2(kChiDf);
    const double T = mixer(eng);
    for (Eigen::Index j = 0; j < J; ++j) {
      const double v = chi ? chi2(eng) - kChiDf : normal(eng);
      scores(i, j) = c * T * v;
    }
  }

  Matrix basis(J, static_cast<Eigen::Index>(sc.m));
  for (Eigen::Index j = 0; j < J; ++j)
    basis.row(j) = std::sqrt(theta[static_cast<std::size_t>(j)]) * psi[static_cast<std::size_t>(j)].values().transpose();
  Matrix values = scores * basis;
  return {FunctionalSample(grid, std::move(values)), theta, std::move(psi), std::move(scores)};
}

double score_density(SimModel model, double y) {
  const double c = mixing_constant(model);
  const bool chi = chi_square_model(model);
  auto v_density = [chi](double v) {
    if (!chi) return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
    const double x = v + kChiDf;
    if (x <= 0.0) return 0.0;
    // chi2(8) density: x^3 e^{-x/2} / (2^4 Gamma(4)).
    return x * x * x * std::exp(-0.5 * x) / 96.0;
  };
  // Composite Simpson over T in [1, 2].
  constexpr int kIntervals = 2000;
  const double step = 1.0 / kIntervals;
  double sum = 0.0;
  for (int k = 0; k <= kIntervals; ++k) {
    const double t = 1.0 + step * k;
    const double scale = c * t;
    const double f = v_density(y / scale) / scale;
    sum += f * (k == 0 || k == kIntervals ? 1.0 : (k % 2 ? 4.0 : 2.0));
  }
  return sum * step / 3.0;
}

double score_mode(SimModel model) {
  if (!chi_square_model(model)) return 0.0;
  // For fixed T the mode is c T (df - 2 - df) = -2 c T, so the mixture mode lies in [-4c, -2c].
  const double c = mixing_constant(model);
  double a = -5.0 * c, b = -c;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = score_density(model, x1), f2 = score_density(model, x2);
  while (b - a > 1e-11) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = score_density(model, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = score_density(model, x2);
    }
  }
  return 0.5 * (a + b);
}

Curve true_modal_curve(SimModel model, const Grid& grid, std::size_t J) {
  const double m = score_mode(model);
  const auto theta = model_eigenvalues(model, J);
  const auto psi = cosine_basis(grid, J);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < J; ++j) v += std::sqrt(theta[j]) * m * psi[j].values();
  return Curve(grid, std::move(v));
}

MseResult mse_curve(const std::vector<Curve>& estimates, const Curve& truth) {
  if (estimates.empty()) throw InputError("mse_curve needs at least one estimate");
  Vector acc = Vector::Zero(static_cast<Eigen::Index>(truth.size()));
  for (const Curve& e : estimates) {
    require_same_grid(e.grid(), truth.grid());
    const Vector d = e.values() - truth.values();
    acc += d.cwiseProduct(d);
  }
  acc /= static_cast<double>(estimates.size());
  const double integrated = truth.grid().weight_vector().dot(acc);
  return {Curve(truth.grid(), std::move(acc)), integrated};
}

std::vector<ModeStudyRow> run_mode_study(const ModeStudyConfig& config) {
  if (config.replications < 1) throw InputError("mode study needs at least one replication");
  if (config.truncations.empty()) throw InputError("mode study needs at least one truncation");
  std::size_t max_T = 0;
  for (std::size_t T : config.truncations) {
    if (T < 1) throw InputError("truncation T must be at least 1");
    max_T = std::max(max_T, T);
  }
  const std::size_t n_est = config.estimators.size();
  const std::size_t n_T = config.truncations.size();
  const Grid grid = Grid::uniform(0.0, 1.0, config.m);

  std::vector<ModeStudyRow> rows;
  for (std::size_t k = 0; k < config.models.size(); ++k) {
    const SimModel model = config.models[k];
    const Curve truth = true_modal_curve(model, grid, 10);
    // estimates[e * n_T + t][b]
    std::vector<std::vector<Vector>> estimates(n_est * n_T, std::vector<Vector>(config.replications));
    std::exception_ptr failure;
    const auto B = static_cast<std::ptrdiff_t>(config.replications);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < B; ++b) {
      try {
        const Seed seed = substream_seed(config.seed, (static_cast<std::uint64_t>(k) << 32) | static_cast<std::uint64_t>(b));
        const GeneratedSample gen = generate_sample({model, config.n, config.m, 10, seed});
        const FpcaModel fit = fit_fpca(gen.sample, max_T);
        const auto densities = fit_score_densities(fit, max_T);
        for (std::size_t e = 0; e < n_est; ++e)
          for (std::size_t t = 0; t < n_T; ++t) {
            const std::size_t T = config.truncations[t];
            const Curve est = config.estimators[e] == ModalEstimator::univariate ? modal_curve(fit, densities, T)
                                                                                   : multivariate_modal_curve(fit, T);
            estimates[e * n_T + t][static_cast<std::size_t>(b)] = est.values();
          }
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t e = 0; e < n_est; ++e)
      for (std::size_t t = 0; t < n_T; ++t) {
        std::vector<Curve> curves;
        curves.reserve(config.replications);
        for (auto& v : estimates[e * n_T + t]) curves.emplace_back(grid, std::move(v));
        rows.push_back({model, config.estimators[e], config.truncations[t], mse_curve(curves, truth).integrated});
      }
  }
  return rows;
}

}  // namespace fdens
