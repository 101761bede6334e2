#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fdens/rng.hpp"

namespace fdens {

/// Zero-mean, unit-variance law of a principal component score.
class ScoreLaw {
 public:
  enum class Kind { gaussian, chi_square, uniform };

  static ScoreLaw gaussian() { return ScoreLaw(Kind::gaussian, 0.0); }
  /// (chi^2(df) - df) / sqrt(2 df).
  static ScoreLaw chi_square(double df);
  /// Uniform on [-sqrt 3, sqrt 3].
  static ScoreLaw uniform() { return ScoreLaw(Kind::uniform, 0.0); }
  /// "gaussian", "uniform", "chisq:<df>".
  static ScoreLaw parse(const std::string& name);

  Kind kind() const { return kind_; }
  double df() const { return df_; }
  std::string name() const;

  double log_density(double u) const;
  double density(double u) const { return std::exp(log_density(u)); }

 private:
  friend class ScoreSampler;
  ScoreLaw(Kind k, double df) : kind_(k), df_(df) {}
  Kind kind_;
  double df_;
};

/// Holds the distribution objects for one engine; not shared across threads.
class ScoreSampler {
 public:
  explicit ScoreSampler(const ScoreLaw& law)
      : law_(law), chi_(law.kind_ == ScoreLaw::Kind::chi_square ? law.df_ : 1.0), unif_(-std::numbers::sqrt3, std::numbers::sqrt3) {}
  double operator()(Engine& eng) {
    switch (law_.kind_) {
      case ScoreLaw::Kind::gaussian: return normal_(eng);
      case ScoreLaw::Kind::chi_square: return (chi_(eng) - law_.df_) / std::sqrt(2.0 * law_.df_);
      case ScoreLaw::Kind::uniform: return unif_(eng);
    }
    return 0.0;
  }

 private:
  ScoreLaw law_;
  std::normal_distribution<double> normal_;
  std::chi_squared_distribution<double> chi_;
  std::uniform_real_distribution<double> unif_;
};


}  // namespace fdens
