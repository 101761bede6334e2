#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fdens {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Ordered abscissae on a compact interval with composite-trapezoid weights.
/// Copies share the underlying storage; a grid never changes after construction.
class Grid {
 public:
  /// Throws InputError unless there are at least two strictly increasing, finite points.
  explicit Grid(std::vector<double> points);

  static Grid uniform(double lower, double upper, std::size_t m);

  std::size_t size() const { return data_->points.size(); }
  std::span<const double> points() const { return data_->points; }
  std::span<const double> weights() const { return data_->weights; }
  const Vector& weight_vector() const { return data_->weight_vector; }
  double lower() const { return data_->points.front(); }
  double upper() const { return data_->points.back(); }

  /// Same storage, or identical abscissae.
  bool same_as(const Grid& other) const;

 private:
  struct Data {
    std::vector<double> points;
    std::vector<double> weights;
    Vector weight_vector;
  };
  std::shared_ptr<const Data> data_;
};

class Curve {
 public:
  /// Throws InputError on length mismatch or non-finite values.
  Curve(Grid grid, Vector values);
  Curve(Grid grid, std::span<const double> values);

  static Curve zero(const Grid& grid);
  template <class F>
  static Curve from_function(const Grid& grid, F&& f) {
    Vector v(grid.size());
    for (std::size_t t = 0; t < grid.size(); ++t) v[t] = f(grid.points()[t]);
    return Curve(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t t) const { return values_[static_cast<Eigen::Index>(t)]; }

  Curve operator+(const Curve& other) const;
  Curve operator-(const Curve& other) const;
  Curve operator*(double s) const;
  friend Curve operator*(double s, const Curve& c) { return c * s; }

 private:
  Grid grid_;
  Vector values_;
};

/// n curves on one grid, stored as an n x m matrix (row i = curve i).
class FunctionalSample {
 public:
  FunctionalSample(Grid grid, Matrix values);
  explicit FunctionalSample(const std::vector<Curve>& curves);

  const Grid& grid() const { return grid_; }
  const Matrix& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  Curve curve(std::size_t i) const;

 private:
  Grid grid_;
  Matrix values_;
};

double inner_product(const Curve& f, const Curve& g);
double l2_norm(const Curve& f);
double l2_distance(const Curve& f, const Curve& g);

struct CenteredSample {
  Curve mean;
  FunctionalSample centered;
};

CenteredSample center_sample(const FunctionalSample& s);

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace fdens
