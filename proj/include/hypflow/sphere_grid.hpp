#pragma once

// Uniform discretizations of the parameter sphere S^n and second-order finite
// difference operators on sampled functions.
//
//   Circle        n = 1, theta_j = 2 pi j / m, periodic.
//   Axisymmetric  n >= 2, polar angle theta_j = j pi / (m - 1), both poles on
//                 the grid; functions depend on theta only.

#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hypflow/errors.hpp"

namespace hypflow {

enum class Topology { Circle, Axisymmetric };

inline const char* to_string(Topology t) {
  return t == Topology::Circle ? "circle" : "axisymmetric";
}

class Grid {
 public:
  static constexpr int kMinNodes = 8;

  static std::shared_ptr<const Grid> make(Topology topology, int n, int m) {
    if (m < kMinNodes) {
      throw ConfigError("grid needs at least " + std::to_string(kMinNodes) + " nodes, got " +
                        std::to_string(m));
    }
    if (topology == Topology::Circle && n != 1) {
      throw ConfigError("circle grids describe curves (n = 1), got n = " + std::to_string(n));
    }
    if (topology == Topology::Axisymmetric && n < 2) {
      throw ConfigError("axisymmetric grids need n >= 2, got n = " + std::to_string(n));
    }
    return std::shared_ptr<const Grid>(new Grid(topology, n, m));
  }

  /// Circle for n = 1, Axisymmetric otherwise.
  static std::shared_ptr<const Grid> for_dimension(int n, int m) {
    return make(n == 1 ? Topology::Circle : Topology::Axisymmetric, n, m);
  }

  Topology topology() const noexcept { return topology_; }
  int dim() const noexcept { return n_; }
  int size() const noexcept { return m_; }
  double spacing() const noexcept { return h_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  double node(int j) const { return nodes_[j]; }
  bool is_pole(int j) const noexcept {
    return topology_ == Topology::Axisymmetric && (j == 0 || j == m_ - 1);
  }

  bool same_as(const Grid& o) const noexcept {
    return topology_ == o.topology_ && n_ == o.n_ && m_ == o.m_;
  }

 private:
  Grid(Topology topology, int n, int m) : topology_(topology), n_(n), m_(m) {
    nodes_.resize(m);
    if (topology == Topology::Circle) {
      h_ = 2.0 * std::numbers::pi / m;
      for (int j = 0; j < m; ++j) nodes_[j] = 2.0 * std::numbers::pi * j / m;
    } else {
      h_ = std::numbers::pi / (m - 1);
      for (int j = 0; j < m; ++j) nodes_[j] = std::numbers::pi * j / (m - 1);
      nodes_[m - 1] = std::numbers::pi;
    }
  }

  Topology topology_;
  int n_;
  int m_;
  double h_ = 0.0;
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(Topology topology, int n, int m) { return Grid::make(topology, n, m); }

/// One real value per grid node.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ConfigError("scalar field without a grid");
    if (static_cast<int>(values_.size()) != grid_->size()) {
      throw ConfigError("field has " + std::to_string(values_.size()) + " values for a grid of " +
                        std::to_string(grid_->size()) + " nodes");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw ConfigError("field contains a non-finite value");
    }
  }

  /// Sample f(theta) at the grid nodes.
  template <typename F>
  static ScalarField sample(GridPtr grid, F&& f) {
    std::vector<double> v(grid->size());
    for (int j = 0; j < grid->size(); ++j) v[j] = f(grid->node(j));
    return ScalarField(std::move(grid), std::move(v));
  }

  static ScalarField constant(GridPtr grid, double value) {
    const int m = grid->size();
    return ScalarField(std::move(grid), std::vector<double>(m, value));
  }

  const GridPtr& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  double operator[](int j) const { return values_[j]; }
  int size() const noexcept { return static_cast<int>(values_.size()); }

  double min() const;
  double max() const;

  /// Cyclic relabelling: result[j] = this[(j - k) mod m]. Circle grids only.
  ScalarField shifted(int k) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

inline double ScalarField::min() const {
  double r = values_.front();
  for (double v : values_) r = v < r ? v : r;
  return r;
}

inline double ScalarField::max() const {
  double r = values_.front();
  for (double v : values_) r = v > r ? v : r;
  return r;
}

inline ScalarField ScalarField::shifted(int k) const {
  if (grid_->topology() != Topology::Circle) {
    throw ConfigError("cyclic shifts are only defined on circle grids");
  }
  const int m = size();
  const int s = ((k % m) + m) % m;
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) out[(j + s) % m] = values_[j];
  return ScalarField(grid_, std::move(out));
}

/// Per-node finite-difference data for a field.
///
/// d1     first meridional derivative (0 at poles)
/// d2     second meridional derivative
/// d_az   second derivative along each azimuthal direction, cot(theta) d1;
///        equal to d2 at the poles (regular limit)
/// lap    Laplace-Beltrami: d2 + (n-1) d_az
struct SphereDerivatives {
  std::vector<double> d1;
  std::vector<double> d2;
  std::vector<double> d_az;
  std::vector<double> lap;
};

inline SphereDerivatives differentiate(const ScalarField& f) {
  const Grid& g = *f.grid();
  const int m = g.size();
  const int n = g.dim();
  const double h = g.spacing();
  const double inv_2h = 1.0 / (2.0 * h);
  const double inv_h2 = 1.0 / (h * h);
  const auto v = f.values();

  SphereDerivatives d;
  d.d1.resize(m);
  d.d2.resize(m);
  d.d_az.assign(m, 0.0);
  d.lap.resize(m);

  if (g.topology() == Topology::Circle) {
    for (int j = 0; j < m; ++j) {
      const double left = v[j == 0 ? m - 1 : j - 1];
      const double right = v[j == m - 1 ? 0 : j + 1];
      d.d1[j] = (right - left) * inv_2h;
      d.d2[j] = ((right + left) - 2.0 * v[j]) * inv_h2;
      d.lap[j] = d.d2[j];
    }
    return d;
  }

  for (int j = 1; j < m - 1; ++j) {
    const double left = v[j - 1];
    const double right = v[j + 1];
    d.d1[j] = (right - left) * inv_2h;
    d.d2[j] = ((right + left) - 2.0 * v[j]) * inv_h2;
    const double theta = g.node(j);
    d.d_az[j] = std::cos(theta) / std::sin(theta) * d.d1[j];
  }
  // Poles: smooth axisymmetric functions are even in theta there, so the
  // ghost value across the pole mirrors the first interior node.
  for (int j : {0, m - 1}) {
    const int inner = j == 0 ? 1 : m - 2;
    d.d1[j] = 0.0;
    d.d2[j] = 2.0 * (v[inner] - v[j]) * inv_h2;
    d.d_az[j] = d.d2[j];
  }
  for (int j = 0; j < m; ++j) d.lap[j] = d.d2[j] + (n - 1) * d.d_az[j];
  return d;
}

/// |grad_S f|^2.
inline ScalarField sphere_gradient_sq(const ScalarField& f) {
  auto d = differentiate(f);
  for (double& x : d.d1) x *= x;
  return ScalarField(f.grid(), std::move(d.d1));
}

/// Laplace-Beltrami operator of the unit sphere.
inline ScalarField sphere_laplacian(const ScalarField& f) {
  return ScalarField(f.grid(), differentiate(f).lap);
}

/// Hessian of f evaluated twice on grad f: f'' (f')^2 along the meridian.
inline ScalarField hessian_grad_grad(const ScalarField& f) {
  const auto d = differentiate(f);
  std::vector<double> out(d.d1.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = d.d2[j] * (d.d1[j] * d.d1[j]);
  return ScalarField(f.grid(), std::move(out));
}

}  // namespace hypflow
