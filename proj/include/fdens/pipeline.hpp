#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fdens/curvespace.hpp"
#include "fdens/rng.hpp"

namespace fdens {

/// Everything the command-line tools read from flags or a JSON config file.
/// Keys in the file are the member names.
struct AnalysisConfig {
  std::size_t components = 20;
  /// Dimensions at which the log-density is reported; the first drives grouping.
  std::vector<std::size_t> r{2};
  std::size_t truncation = 4;
  std::string kernel = "gaussian";
  /// <= 0 selects the normal-reference rule.
  double bandwidth = 0.0;
  Seed seed = 1;
  std::uint64_t mc_samples = 200000;
  double lambda = 3.0;
  std::string out = "out";
  std::size_t groups = 5;
  std::size_t contour_points = 50;

  // small-ball runs
  std::string decay = "geometric:0.5";
  std::size_t j_max = 200;
  std::string law = "gaussian";
  std::vector<double> radii;
  std::vector<double> center;
  /// "auto", "exponential" or "superexponential".
  std::string regime = "auto";

  // simulations
  std::string model = "iii";
  std::size_t n = 100;
  std::size_t m = 201;
  std::vector<std::string> models{"i", "ii", "iii", "iv"};
  std::size_t replications = 100;
  std::vector<std::size_t> truncations{1, 2, 3, 4};

  void validate() const;
};

std::string config_to_json(const AnalysisConfig& config);
/// Unknown keys are rejected; missing keys keep their defaults.
AnalysisConfig config_from_json(const std::string& text, const AnalysisConfig& defaults = {});
AnalysisConfig load_config(const std::filesystem::path& path, const AnalysisConfig& defaults = {});

/// Names of the files written by run_analysis, in the output directory.
inline const std::vector<std::string> kAnalysisArtifacts{"model.json",     "scores.csv",  "densities.json",
                                                          "logdensity.csv", "groups.csv",  "contour.csv",
                                                          "central.csv"};

/// FPCA only: model.json and scores.csv.
void run_fpca(const FunctionalSample& sample, const AnalysisConfig& config);
/// Full pipeline; writes kAnalysisArtifacts into config.out.
void run_analysis(const FunctionalSample& sample, const AnalysisConfig& config);
/// smallball.csv
void run_smallball(const AnalysisConfig& config);
/// sample.csv (curve format) and truth.json
void run_simulate(const AnalysisConfig& config);
/// imse.csv and imse.json
void run_mode_study_cli(const AnalysisConfig& config);

}  // namespace fdens
