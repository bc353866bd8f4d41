#pragma once

// Quadrature over the parameter sphere: area, enclosed volume, averaged mean
// curvature.
//
// Sums are taken over the sorted terms, so every integral is invariant, bit
// for bit, under any relabelling of the nodes (in particular cyclic shifts of
// a circle grid).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "hypflow/graph_geometry.hpp"
#include "hypflow/hyptrig.hpp"
#include "hypflow/sphere_grid.hpp"

namespace hypflow {

/// Order-independent compensated sum.
inline double stable_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  double comp = 0.0;
  for (double x : terms) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

class QuadratureRule {
 public:
  explicit QuadratureRule(GridPtr grid) : grid_(std::move(grid)) {
    const int m = grid_->size();
    const double h = grid_->spacing();
    weights_.resize(m);
    if (grid_->topology() == Topology::Circle) {
      std::fill(weights_.begin(), weights_.end(), h);
      return;
    }
    // Trapezoid in theta; the sin^{n-1} factor already vanishes at the poles.
    const int n = grid_->dim();
    const double ring = unit_sphere_volume(n - 1);
    for (int j = 0; j < m; ++j) {
      weights_[j] = grid_->is_pole(j) ? 0.0 : h * ring * std::pow(std::sin(grid_->node(j)), n - 1);
    }
  }

  const GridPtr& grid() const noexcept { return grid_; }
  std::span<const double> weights() const noexcept { return weights_; }

  double integrate(std::span<const double> values) const {
    std::vector<double> terms(values.size());
    for (std::size_t j = 0; j < terms.size(); ++j) terms[j] = weights_[j] * values[j];
    return stable_sum(std::move(terms));
  }

 private:
  GridPtr grid_;
  std::vector<double> weights_;
};

inline double surface_area(const QuadratureRule& q, const GeometryFields& f) {
  return q.integrate(f.area_element);
}

inline double surface_area(const RadialGraph& g) {
  return surface_area(QuadratureRule(g.grid()), compute_geometry(g));
}

inline double enclosed_volume(const QuadratureRule& q, const RadialGraph& g) {
  const int n = g.dim();
  std::vector<double> radial(g.size());
  for (int j = 0; j < g.size(); ++j) radial[j] = radial_volume_integral(g.rho()[j], n, g.params());
  return q.integrate(radial);
}

inline double enclosed_volume(const RadialGraph& g) { return enclosed_volume(QuadratureRule(g.grid()), g); }

/// Area-weighted mean of H.
inline double averaged_mean_curvature(const QuadratureRule& q, const GeometryFields& f) {
  std::vector<double> weighted(f.H.size());
  for (std::size_t j = 0; j < weighted.size(); ++j) weighted[j] = f.H[j] * f.area_element[j];
  const double h_bar = q.integrate(weighted) / q.integrate(f.area_element);
  // Keep the mean inside the sampled range despite rounding.
  const auto [lo, hi] = std::minmax_element(f.H.begin(), f.H.end());
  return std::clamp(h_bar, *lo, *hi);
}

inline double averaged_mean_curvature(const RadialGraph& g) {
  return averaged_mean_curvature(QuadratureRule(g.grid()), compute_geometry(g));
}

}  // namespace hypflow
