#pragma once

// Extrinsic geometry of a radial graph u -> exp_p(rho(u) u) over the unit
// sphere of T_p, in the hyperbolic space of curvature lambda.
//
// With s = s_lambda(rho), c = c_lambda(rho) and the sphere operators of
// sphere_grid.hpp, the normal direction is xi = s d_r - grad_S rho,
// |xi|^2 = s^2 + |grad_S rho|^2, the outward unit normal N = xi / |xi|, and
//
//   alpha = -(1/|xi|) (s Hess_S rho - s^2 c g_S - 2 c d rho (x) d rho)
//   g     = d rho (x) d rho + s^2 g_S
//
// Mean curvature is the trace of g^{-1} alpha; round spheres have H > 0.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hypflow/errors.hpp"
#include "hypflow/hyptrig.hpp"
#include "hypflow/sphere_grid.hpp"

namespace hypflow {

/// A positive radial function sampled on a grid, with the ambient curvature.
class RadialGraph {
 public:
  RadialGraph(ScalarField rho, LambdaParams params) : rho_(std::move(rho)), params_(params) {
    for (int j = 0; j < rho_.size(); ++j) {
      if (!(rho_[j] > 0.0)) {
        throw DomainError("radial function must be positive; rho[" + std::to_string(j) +
                          "] = " + std::to_string(rho_[j]));
      }
    }
  }

  RadialGraph(GridPtr grid, std::vector<double> rho, LambdaParams params)
      : RadialGraph(ScalarField(std::move(grid), std::move(rho)), params) {}

  const GridPtr& grid() const noexcept { return rho_.grid(); }
  const ScalarField& rho() const noexcept { return rho_; }
  const LambdaParams& params() const noexcept { return params_; }
  int dim() const noexcept { return grid()->dim(); }
  int size() const noexcept { return rho_.size(); }

  /// Same grid and params, new radial values.
  RadialGraph with_rho(std::vector<double> rho) const {
    return RadialGraph(ScalarField(grid(), std::move(rho)), params_);
  }

  RadialGraph shifted(int k) const { return RadialGraph(rho_.shifted(k), params_); }

 private:
  ScalarField rho_;
  LambdaParams params_;
};

/// Per-node geometric quantities of a radial graph.
struct GeometryFields {
  std::vector<double> grad_sq;       // |grad_S rho|^2
  std::vector<double> xi_norm;       // |xi|
  std::vector<double> support_cos;   // <N, d_r>
  std::vector<double> sigma;         // s_lambda(rho) <N, d_r>
  std::vector<double> H;             // mean curvature (trace convention)
  std::vector<double> kappa_merid;   // principal curvature along the meridian
  std::vector<double> kappa_az;      // azimuthal principal curvature, multiplicity n-1 (n >= 2)
  std::vector<double> kappa_min;
  std::vector<double> kappa_max;
  std::vector<double> area_element;  // s^{n-1} |xi|, density w.r.t. the sphere measure
  SphereDerivatives derivs;          // finite differences of rho the fields were built from
};

inline GeometryFields compute_geometry(const RadialGraph& g) {
  auto d = differentiate(g.rho());
  const int m = g.size();
  const int n = g.dim();
  const auto& p = g.params();
  const auto rho = g.rho().values();

  GeometryFields f;
  for (auto* v : {&f.grad_sq, &f.xi_norm, &f.support_cos, &f.sigma, &f.H, &f.kappa_merid,
                  &f.kappa_min, &f.kappa_max, &f.area_element}) {
    v->resize(m);
  }
  if (n >= 2) f.kappa_az.resize(m);

  for (int j = 0; j < m; ++j) {
    const auto t = lambda_trig(rho[j], p);
    const double s = t.s;
    const double c = t.c;
    const double gsq = d.d1[j] * d.d1[j];
    const double xi = std::sqrt(s * s + gsq);
    const double xi2 = xi * xi;
    const double hess_gg = d.d2[j] * gsq;

    f.grad_sq[j] = gsq;
    f.xi_norm[j] = xi;
    f.support_cos[j] = s / xi;
    f.sigma[j] = s * (s / xi);
    f.H[j] = -(d.lap[j] - hess_gg / xi2) / (s * xi) + (c / xi) * (n + gsq / xi2);
    f.area_element[j] = std::pow(s, n - 1) * xi;

    const double k_merid = -(s * d.d2[j] - s * s * c - 2.0 * c * gsq) / (xi * xi2);
    f.kappa_merid[j] = k_merid;
    if (n >= 2) {
      const double k_az = -(d.d_az[j] - s * c) / (xi * s);
      f.kappa_az[j] = k_az;
      f.kappa_min[j] = std::min(k_merid, k_az);
      f.kappa_max[j] = std::max(k_merid, k_az);
    } else {
      f.kappa_min[j] = k_merid;
      f.kappa_max[j] = k_merid;
    }
  }
  f.derivs = std::move(d);
  return f;
}

struct NormalFields {
  ScalarField xi_norm;
  ScalarField support_cos;
  ScalarField sigma;
};

inline NormalFields xi_and_support(const RadialGraph& g) {
  auto f = compute_geometry(g);
  return {ScalarField(g.grid(), std::move(f.xi_norm)),
          ScalarField(g.grid(), std::move(f.support_cos)),
          ScalarField(g.grid(), std::move(f.sigma))};
}

inline ScalarField mean_curvature(const RadialGraph& g) {
  return ScalarField(g.grid(), compute_geometry(g).H);
}

struct PrincipalCurvatures {
  ScalarField kappa_min;
  ScalarField kappa_max;
};

inline PrincipalCurvatures second_fundamental_and_principal(const RadialGraph& g) {
  auto f = compute_geometry(g);
  return {ScalarField(g.grid(), std::move(f.kappa_min)),
          ScalarField(g.grid(), std::move(f.kappa_max))};
}

inline ScalarField area_element(const RadialGraph& g) {
  return ScalarField(g.grid(), compute_geometry(g).area_element);
}

/// <u_j, z> for the unit direction u_j of node j (axis first on axisymmetric grids).
inline double node_direction_dot(const Grid& grid, int j, std::span<const double> z) {
  const double theta = grid.node(j);
  if (grid.topology() == Topology::Circle) return std::cos(theta) * z[0] + std::sin(theta) * z[1];
  return std::cos(theta) * z[0];
}

/// Radial function of the geodesic sphere of radius r_sphere + z0 whose center
/// has normal coordinates z about the grid origin. Solves, per node u,
///   c(r_sphere + z0) = c(rho) c(|z|) + lambda s(rho) s(|z|) <u, z>/|z|.
inline RadialGraph offset_sphere_graph(const GridPtr& grid, const LambdaParams& params,
                                       double r_sphere, double z0, std::span<const double> z) {
  const int n = grid->dim();
  if (static_cast<int>(z.size()) != n + 1) {
    throw ConfigError("center offset must have " + std::to_string(n + 1) + " components");
  }
  if (grid->topology() == Topology::Axisymmetric) {
    for (std::size_t i = 1; i < z.size(); ++i) {
      if (z[i] != 0.0) throw ConfigError("axisymmetric grids require the offset along the axis");
    }
  }
  double zn2 = 0.0;
  for (double zi : z) zn2 += zi * zi;
  const double zn = std::sqrt(zn2);
  const double radius = r_sphere + z0;
  if (!(radius > zn)) {
    throw ConfigError("offset sphere does not contain the grid origin (radius " +
                      std::to_string(radius) + ", |z| = " + std::to_string(zn) + ")");
  }

  const int m = grid->size();
  std::vector<double> rho(m, radius);
  if (zn == 0.0) return RadialGraph(grid, std::move(rho), params);

  const double k = params.sqrt_abs_lambda();
  const double target = c_lambda(radius, params);
  const double cz = c_lambda(zn, params);
  const double sz = s_lambda(zn, params);
  for (int j = 0; j < m; ++j) {
    const double cos_angle = node_direction_dot(*grid, j, z) / zn;
    const double b = params.lambda() * sz * cos_angle;
    // F is negative at 0 (origin inside) and nonnegative at radius + |z|.
    auto F = [&](double r) { return c_lambda(r, params) * cz + b * s_lambda(r, params) - target; };
    double lo = 0.0;
    double hi = radius + zn;
    for (int it = 0; it < 2000; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (F(mid) < 0.0 ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
      // dc/dr = k^2 s, ds/dr = c.
      const double dF = k * k * s_lambda(r, params) * cz + b * c_lambda(r, params);
      if (dF == 0.0) break;
      const double next = r - F(r) / dF;
      if (!(next >= lo && next <= hi)) break;
      r = next;
    }
    rho[j] = r;
  }
  return RadialGraph(grid, std::move(rho), params);
}

}  // namespace hypflow
