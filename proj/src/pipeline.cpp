#include "fdens/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fdens/central.hpp"
#include "fdens/error.hpp"
#include "fdens/fpca.hpp"
#include "fdens/io.hpp"
#include "fdens/score_density.hpp"
#include "fdens/simulation.hpp"
#include "fdens/smallball.hpp"
#include "fdens/surrogate.hpp"

namespace fdens {

using nlohmann::json;

namespace {

#define FDENS_CONFIG_FIELDS(X)                                                                                  \
  X(components) X(r) X(truncation) X(kernel) X(bandwidth) X(seed) X(mc_samples) X(lambda) X(out) X(groups)     \
      X(contour_points) X(decay) X(j_max) X(law) X(radii) X(center) X(regime) X(model) X(n) X(m) X(models)      \
          X(replications) X(truncations)

json to_json(const AnalysisConfig& c) {
  json j;
#define FDENS_PUT(name) j[#name] = c.name;
  FDENS_CONFIG_FIELDS(FDENS_PUT)
#undef FDENS_PUT
  return j;
}

std::vector<double> to_vector(const Vector& v) { return {v.data(), v.data() + v.size()}; }
std::vector<double> to_vector(std::span<const double> v) { return {v.begin(), v.end()}; }

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  return out + '\n';
}

std::filesystem::path prepare_out(const AnalysisConfig& config) {
  const std::filesystem::path dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + config.out + "': " + ec.message());
  return dir;
}

std::string num(double x) { return format_double(x); }
std::string num(std::size_t x) { return std::to_string(x); }

json model_json(const FpcaModel& model, std::size_t n, std::span<const ScoreDensityEstimator> densities) {
  json j;
  j["n"] = n;
  j["components"] = model.components();
  j["grid"] = to_vector(model.grid.points());
  j["mean"] = to_vector(model.mean.values());
  j["eigenvalues"] = model.eigenvalues;
  std::vector<double> ve;
  for (std::size_t k = 1; k <= model.components(); ++k) ve.push_back(variance_explained(model, k));
  j["variance_explained"] = ve;
  json psi = json::array();
  for (const auto& f : model.eigenfunctions) psi.push_back(to_vector(f.values()));
  j["eigenfunctions"] = psi;
  if (!densities.empty()) {
    std::vector<double> bw;
    for (const auto& d : densities) bw.push_back(d.bandwidth());
    j["bandwidths"] = bw;
    j["kernel"] = std::string(kernel_name(densities.front().kernel()));
  }
  return j;
}

std::string scores_csv(const FpcaModel& model) {
  std::ostringstream os;
  os << "curve";
  for (Eigen::Index j = 0; j < model.scores.cols(); ++j) os << ",score_" << j + 1;
  os << '\n';
  for (Eigen::Index i = 0; i < model.scores.rows(); ++i) {
    os << i;
    for (Eigen::Index j = 0; j < model.scores.cols(); ++j) os << ',' << format_double(model.scores(i, j));
    os << '\n';
  }
  return os.str();
}

}  // namespace

void AnalysisConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v < 1) throw InputError(std::string(name) + " must be at least 1");
  };
  positive(components, "components");
  positive(truncation, "truncation");
  positive(groups, "groups");
  positive(contour_points, "contour_points");
  positive(j_max, "j_max");
  positive(n, "n");
  positive(replications, "replications");
  if (m < 2) throw InputError("m must be at least 2");
  if (mc_samples < 1) throw InputError("mc_samples must be at least 1");
  if (r.empty()) throw InputError("r needs at least one value");
  for (std::size_t v : r) positive(v, "r");
  for (std::size_t v : truncations) positive(v, "truncations");
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  if (out.empty()) throw InputError("out must name a directory");
  if (regime != "auto" && regime != "exponential" && regime != "superexponential")
    throw InputError("regime must be auto, exponential or superexponential");
  parse_kernel(kernel);
}

std::string config_to_json(const AnalysisConfig& config) { return to_json(config).dump(2) + "\n"; }

AnalysisConfig config_from_json(const std::string& text, const AnalysisConfig& defaults) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  const json known = to_json(defaults);
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw InputError("unknown config key '" + key + "'");
  AnalysisConfig c = defaults;
  try {
#define FDENS_GET(name) \
  if (j.contains(#name)) j.at(#name).get_to(c.name);
    FDENS_CONFIG_FIELDS(FDENS_GET)
#undef FDENS_GET
  } catch (const json::exception& e) {
    throw InputError(std::string("bad config value: ") + e.what());
  }
  return c;
}

AnalysisConfig load_config(const std::filesystem::path& path, const AnalysisConfig& defaults) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), defaults);
}

void run_fpca(const FunctionalSample& sample, const AnalysisConfig& config) {
  config.validate();
  if (sample.size() < 2) throw InputError("FPCA needs at least two curves, got " + std::to_string(sample.size()));
  const auto dir = prepare_out(config);
  const FpcaModel model = fit_fpca(sample, std::min({config.components, sample.size(), sample.grid().size()}));
  write_text_file(dir / "model.json", model_json(model, sample.size(), {}).dump(2) + "\n");
  write_text_file(dir / "scores.csv", scores_csv(model));
}

void run_analysis(const FunctionalSample& sample, const AnalysisConfig& config) {
  config.validate();
  if (sample.size() < 2) throw InputError("analysis needs at least two curves, got " + std::to_string(sample.size()));
  const auto dir = prepare_out(config);
  const Kernel kernel = parse_kernel(config.kernel);

  const FpcaModel model = fit_fpca(sample, std::min({config.components, sample.size(), sample.grid().size()}));
  const std::size_t K = model.components();
  const auto densities =
      fit_score_densities(model, K, kernel, config.bandwidth > 0.0 ? std::optional(config.bandwidth) : std::nullopt);

  write_text_file(dir / "model.json", model_json(model, sample.size(), densities).dump(2) + "\n");
  write_text_file(dir / "scores.csv", scores_csv(model));

  {
    json comps = json::array();
    for (std::size_t j = 0; j < K; ++j) {
      const auto& d = densities[j];
      std::vector<double> us(201);
      const double lo = d.sample_min() - 3.0 * d.bandwidth(), hi = d.sample_max() + 3.0 * d.bandwidth();
      for (std::size_t k = 0; k < us.size(); ++k) us[k] = lo + (hi - lo) * static_cast<double>(k) / 200.0;
      comps.push_back({{"component", j + 1},
                       {"bandwidth", d.bandwidth()},
                       {"mode", *d.cached_mode()},
                       {"grid", us},
                       {"density", d.evaluate(us)}});
    }
    json j{{"kernel", std::string(kernel_name(kernel))}, {"components", comps}};
    write_text_file(dir / "densities.json", j.dump(2) + "\n");
  }

  // Requested dimensions, clamped to the fitted components.
  std::vector<std::size_t> rs;
  for (std::size_t r : config.r) {
    const std::size_t rr = std::min(r, K);
    if (std::find(rs.begin(), rs.end(), rr) == rs.end()) rs.push_back(rr);
  }
  std::vector<std::vector<double>> ell(rs.size());
  for (std::size_t k = 0; k < rs.size(); ++k) ell[k] = rank_by_density(model, densities, rs[k], 1).log_density;
  {
    std::ostringstream os;
    os << "curve";
    for (std::size_t r : rs) os << ",logdensity_r" << r;
    os << '\n';
    for (std::size_t i = 0; i < sample.size(); ++i) {
      os << i;
      for (std::size_t k = 0; k < rs.size(); ++k) os << ',' << format_double(ell[k][i]);
      os << '\n';
    }
    write_text_file(dir / "logdensity.csv", os.str());
  }
  {
    const auto ranking = rank_by_density(model, densities, rs.front(), std::min(config.groups, sample.size()));
    std::ostringstream os;
    os << "curve,r,logdensity,rank,group\n";
    std::vector<std::size_t> rank(sample.size());
    for (std::size_t k = 0; k < ranking.order.size(); ++k) rank[ranking.order[k]] = k;
    for (std::size_t i = 0; i < sample.size(); ++i)
      os << i << ',' << rs.front() << ',' << format_double(ranking.log_density[i]) << ',' << rank[i] << ','
         << ranking.group[i] << '\n';
    write_text_file(dir / "groups.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "kind,u,v,value\n";
    if (K >= 2) {
      const auto& d1 = densities[0];
      const auto& d2 = densities[1];
      const ScorePlaneGrid spec{d1.sample_min() - 3 * d1.bandwidth(), d1.sample_max() + 3 * d1.bandwidth(),
                                config.contour_points,           d2.sample_min() - 3 * d2.bandwidth(),
                                d2.sample_max() + 3 * d2.bandwidth(), config.contour_points};
      const ContourGrid grid = density_product_grid(model, densities, {1, 2}, spec);
      for (std::size_t a = 0; a < grid.u.size(); ++a)
        for (std::size_t b = 0; b < grid.v.size(); ++b)
          os << "grid," << format_double(grid.u[a]) << ',' << format_double(grid.v[b]) << ','
             << format_double(grid.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) << '\n';
      for (std::size_t i = 0; i < grid.datum_values.size(); ++i)
        os << "datum," << format_double(model.scores(static_cast<Eigen::Index>(i), 0)) << ','
           << format_double(model.scores(static_cast<Eigen::Index>(i), 1)) << ',' << format_double(grid.datum_values[i])
           << '\n';
    }
    write_text_file(dir / "contour.csv", os.str());
  }
  {
    const CentralCurveSet central = central_curves(sample, model, densities, std::min(config.truncation, K));
    std::ostringstream os;
    os << "t,mean,mode,median\n";
    const auto pts = sample.grid().points();
    for (std::size_t t = 0; t < pts.size(); ++t)
      os << format_double(pts[t]) << ',' << format_double(central.mean[t]) << ',' << format_double(central.mode[t])
         << ',' << format_double(central.median.curve[t]) << '\n';
    write_text_file(dir / "central.csv", os.str());
  }
}

void run_smallball(const AnalysisConfig& config) {
  config.validate();
  const auto dir = prepare_out(config);
  ProcessSpec spec{EigenDecaySpec::parse(config.decay, config.j_max), ScoreLaw::parse(config.law), config.center};
  ValidationOptions options;
  if (config.regime == "exponential") options.regime = DecayRegime::exponential;
  if (config.regime == "superexponential") options.regime = DecayRegime::superexponential;
  const auto reports = validate_approximation(spec, config.radii, config.lambda, config.mc_samples, config.seed, options);

  std::ostringstream os;
  os << "h,r,regime,p_mc,ci_lower,ci_upper,q_hat,leading,log_ratio,per_dim_error,hits,unreliable\n";
  for (const auto& rep : reports)
    os << csv_row({num(rep.radius), num(rep.r), regime_name(rep.regime), num(rep.p_mc.p), num(rep.p_mc.lower),
                   num(rep.p_mc.upper), num(rep.q_hat), num(rep.leading), num(rep.log_ratio), num(rep.per_dim_error),
                   std::to_string(rep.p_mc.hits), rep.unreliable ? "1" : "0"});
  write_text_file(dir / "smallball.csv", os.str());
}

void run_simulate(const AnalysisConfig& config) {
  config.validate();
  const auto dir = prepare_out(config);
  const SimModel model = parse_sim_model(config.model);
  const GeneratedSample gen = generate_sample({model, config.n, config.m, 10, config.seed});
  write_curve_csv(dir / "sample.csv", gen.sample);
  json scores = json::array();
  for (Eigen::Index i = 0; i < gen.true_scores.rows(); ++i)
    scores.push_back(to_vector(Vector(gen.true_scores.row(i).transpose())));
  json j{{"model", config.model},
         {"theta", gen.theta},
         {"mixing_constant", mixing_constant(model)},
         {"score_mode", score_mode(model)},
         {"true_scores", scores}};
  write_text_file(dir / "truth.json", j.dump(2) + "\n");
}

void run_mode_study_cli(const AnalysisConfig& config) {
  config.validate();
  const auto dir = prepare_out(config);
  ModeStudyConfig study;
  for (const auto& name : config.models) study.models.push_back(parse_sim_model(name));
  study.replications = config.replications;
  study.n = config.n;
  study.m = config.m;
  study.truncations = config.truncations;
  study.seed = config.seed;
  for (std::size_t T : study.truncations)
    if (T > kMaxJointModeDimension) throw InputError("mode-study truncations must not exceed 4");
  const auto rows = run_mode_study(study);

  std::ostringstream os;
  os << "model,estimator,T,imse\n";
  json arr = json::array();
  for (const auto& row : rows) {
    os << csv_row({sim_model_name(row.model), modal_estimator_name(row.estimator), num(row.T), num(row.imse)});
    arr.push_back({{"model", sim_model_name(row.model)},
                   {"estimator", modal_estimator_name(row.estimator)},
                   {"T", row.T},
                   {"imse", row.imse}});
  }
  write_text_file(dir / "imse.csv", os.str());
  write_text_file(dir / "imse.json", json{{"replications", study.replications}, {"n", study.n}, {"rows", arr}}.dump(2) + "\n");
}

}  // namespace fdens
