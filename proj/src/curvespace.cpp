#include "fdens/curvespace.hpp"

#include <cmath>
#include <string>

#include "fdens/error.hpp"

namespace fdens {

Grid::Grid(std::vector<double> points) {
  const std::size_t m = points.size();
  if (m < 2) throw InputError("grid needs at least two points, got " + std::to_string(m));
  for (std::size_t t = 0; t < m; ++t) {
    if (!std::isfinite(points[t])) throw InputError("grid point " + std::to_string(t) + " is not finite");
    if (t > 0 && !(points[t] > points[t - 1]))
      throw InputError("grid points must be strictly increasing (index " + std::to_string(t) + ")");
  }
  std::vector<double> weights(m);
  weights[0] = 0.5 * (points[1] - points[0]);
  weights[m - 1] = 0.5 * (points[m - 1] - points[m - 2]);
  for (std::size_t t = 1; t + 1 < m; ++t) weights[t] = 0.5 * (points[t + 1] - points[t - 1]);

  auto data = std::make_shared<Data>();
  data->weight_vector = Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(m));
  data->points = std::move(points);
  data->weights = std::move(weights);
  data_ = std::move(data);
}

Grid Grid::uniform(double lower, double upper, std::size_t m) {
  if (m < 2) throw InputError("grid needs at least two points");
  if (!(upper > lower)) throw InputError("grid interval must have upper > lower");
  std::vector<double> p(m);
  const double step = (upper - lower) / static_cast<double>(m - 1);
  for (std::size_t t = 0; t < m; ++t) p[t] = lower + step * static_cast<double>(t);
  p[m - 1] = upper;
  return Grid(std::move(p));
}

bool Grid::same_as(const Grid& other) const {
  if (data_ == other.data_) return true;
  return data_->points == other.data_->points;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) throw InputError("curves live on different grids");
}

namespace {

void require_finite(const Vector& v) {
  for (Eigen::Index t = 0; t < v.size(); ++t)
    if (!std::isfinite(v[t])) throw InputError("non-finite curve value at grid index " + std::to_string(t));
}

}  // namespace

Curve::Curve(Grid grid, Vector values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size())
    throw InputError("curve has " + std::to_string(values_.size()) + " values but grid has " +
                     std::to_string(grid_.size()) + " points");
  require_finite(values_);
}

Curve::Curve(Grid grid, std::span<const double> values)
    : Curve(std::move(grid), Vector(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())))) {}

Curve Curve::zero(const Grid& grid) { return Curve(grid, Vector::Zero(static_cast<Eigen::Index>(grid.size()))); }

Curve Curve::operator+(const Curve& other) const {
  require_same_grid(grid_, other.grid_);
  return Curve(grid_, Vector(values_ + other.values_));
}

Curve Curve::operator-(const Curve& other) const {
  require_same_grid(grid_, other.grid_);
  return Curve(grid_, Vector(values_ - other.values_));
}

Curve Curve::operator*(double s) const { return Curve(grid_, Vector(values_ * s)); }

FunctionalSample::FunctionalSample(Grid grid, Matrix values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.rows() < 1) throw InputError("a functional sample needs at least one curve");
  if (static_cast<std::size_t>(values_.cols()) != grid_.size())
    throw InputError("sample has " + std::to_string(values_.cols()) + " columns but grid has " +
                     std::to_string(grid_.size()) + " points");
  if (!values_.allFinite()) throw InputError("sample contains non-finite values");
}

namespace {

Matrix stack(const std::vector<Curve>& curves) {
  if (curves.empty()) throw InputError("a functional sample needs at least one curve");
  Matrix out(static_cast<Eigen::Index>(curves.size()), static_cast<Eigen::Index>(curves.front().size()));
  for (std::size_t i = 0; i < curves.size(); ++i) {
    require_same_grid(curves.front().grid(), curves[i].grid());
    out.row(static_cast<Eigen::Index>(i)) = curves[i].values().transpose();
  }
  return out;
}

}  // namespace

FunctionalSample::FunctionalSample(const std::vector<Curve>& curves)
    : FunctionalSample(curves.empty() ? Grid::uniform(0, 1, 2) : curves.front().grid(), stack(curves)) {}

Curve FunctionalSample::curve(std::size_t i) const {
  return Curve(grid_, Vector(values_.row(static_cast<Eigen::Index>(i)).transpose()));
}

double inner_product(const Curve& f, const Curve& g) {
  require_same_grid(f.grid(), g.grid());
  const auto& w = f.grid().weights();
  double sum = 0.0;
  for (std::size_t t = 0; t < w.size(); ++t) sum += w[t] * f[t] * g[t];
  return sum;
}

double l2_norm(const Curve& f) { return std::sqrt(inner_product(f, f)); }

double l2_distance(const Curve& f, const Curve& g) {
  require_same_grid(f.grid(), g.grid());
  const auto& w = f.grid().weights();
  double sum = 0.0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    const double d = f[t] - g[t];
    sum += w[t] * d * d;
  }
  return std::sqrt(sum);
}

CenteredSample center_sample(const FunctionalSample& s) {
  const Vector mean = s.values().colwise().mean().transpose();
  Matrix centered = s.values().rowwise() - mean.transpose();
  return {Curve(s.grid(), mean), FunctionalSample(s.grid(), std::move(centered))};
}

}  // namespace fdens
