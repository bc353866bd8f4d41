#pragma once

// Checks of the qualitative behaviour of the flows on computed graphs and
// trajectories: h-convexity margin, inradius / outer-radius / support bounds
// for h-convex domains, exponential rate fits, and an independent curvature
// oracle based on the hyperboloid model.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypflow/errors.hpp"
#include "hypflow/graph_geometry.hpp"
#include "hypflow/hyptrig.hpp"
#include "hypflow/integrals.hpp"

namespace hypflow {

/// One line of the diagnostics time series.
struct DiagnosticsRow {
  double t = 0.0;
  double area = 0.0;
  double volume = 0.0;
  double h_bar = 0.0;
  double sup_dev = 0.0;       // sup |H - H_bar|
  double kappa_margin = 0.0;  // min kappa - sqrt|lambda|
  double rho_min = 0.0;
  double rho_max = 0.0;
  double inradius_lower = 0.0;  // xi(psi(V0))
  double inradius_upper = 0.0;  // psi(V0)
  double renorm_delta = 0.0;
};

inline double h_convexity_margin(const GeometryFields& f, const LambdaParams& p) {
  return *std::min_element(f.kappa_min.begin(), f.kappa_min.end()) - p.sqrt_abs_lambda();
}

/// min over nodes of kappa_min - sqrt|lambda|; positive iff strictly h-convex at grid resolution.
inline double h_convexity_margin(const RadialGraph& g) {
  return h_convexity_margin(compute_geometry(g), g.params());
}

// ---------------------------------------------------------------------------
// Bounds for h-convex domains

enum class BoundStatus { Pass, Fail, NotApplicable };

inline const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Pass: return "pass";
    case BoundStatus::Fail: return "fail";
    case BoundStatus::NotApplicable: return "n/a";
  }
  return "?";
}

/// `value` is compared against `bound`; `upper` says which side is allowed.
struct BoundCheck {
  std::string name;
  BoundStatus status = BoundStatus::NotApplicable;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;
  std::vector<std::string> warnings;

  bool all_passed() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const BoundCheck& c) { return c.status == BoundStatus::Fail; });
  }
  bool applicable() const {
    return std::any_of(checks.begin(), checks.end(),
                       [](const BoundCheck& c) { return c.status != BoundStatus::NotApplicable; });
  }
  const BoundCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct BoundsTolerance {
  double slack = 5e-3;
  double convexity = 1e-6;  // bounds are only asserted when kappa_margin >= -convexity
};

/// Largest geodesic distance between two surface nodes.
inline double node_diameter(const RadialGraph& g) {
  const Grid& grid = *g.grid();
  const auto& p = g.params();
  const int m = g.size();
  double best = 0.0;
  for (int a = 0; a < m; ++a) {
    const auto ta = lambda_trig(g.rho()[a], p);
    for (int b = a + 1; b < m; ++b) {
      const auto tb = lambda_trig(g.rho()[b], p);
      // Axisymmetric: the farthest pair of parallels lies in opposite meridians.
      const double angle = grid.topology() == Topology::Circle ? grid.node(b) - grid.node(a)
                                                               : grid.node(a) + grid.node(b);
      const double cosh_d = ta.c * tb.c + p.lambda() * ta.s * tb.s * std::cos(angle);
      best = std::max(best, std::acosh(std::max(1.0, cosh_d)) / p.sqrt_abs_lambda());
    }
  }
  return best;
}

/// Evaluates the inradius, outer-radius, support and diameter bounds on one
/// graph of a volume-preserving trajectory. The grid origin stands in for the
/// center of an inball: rho_min is the inradius proxy and rho_max the outer
/// radius proxy.
inline BoundsReport check_bounds(const DiagnosticsRow& row, const RadialGraph& g, double v0,
                                 BoundsTolerance tol = {}) {
  const auto& p = g.params();
  const double k = p.sqrt_abs_lambda();
  BoundsReport report;
  if (std::abs(std::abs(p.lambda()) - 1.0) > 1e-12) {
    report.warnings.push_back(
        "the outer-radius and diameter bounds use the constant sqrt|lambda| ln 2, which is "
        "dimensionally consistent only for |lambda| = 1");
  }

  const double outer = psi(v0, g.dim(), p);
  const double inner = xi(outer, p);
  const auto f = compute_geometry(g);
  const double min_support = *std::min_element(f.support_cos.begin(), f.support_cos.end());

  report.checks = {
      {"inradius_lower", BoundStatus::NotApplicable, row.rho_min, inner - tol.slack, false},
      {"inradius_upper", BoundStatus::NotApplicable, row.rho_min, outer + tol.slack, true},
      {"maxd", BoundStatus::NotApplicable, row.rho_max,
       row.rho_min + maxd_excess(row.rho_min, p) + tol.slack, true},
      {"support", BoundStatus::NotApplicable, min_support, k * ta_lambda(row.rho_min, p) - tol.slack,
       false},
      {"diameter", BoundStatus::NotApplicable, node_diameter(g),
       2.0 * (outer + k * std::log(2.0)) + tol.slack, true},
  };
  if (row.kappa_margin < -tol.convexity) {
    report.warnings.push_back("graph is not h-convex; bounds not applicable");
    return report;
  }
  for (auto& c : report.checks) {
    const bool ok = c.upper ? c.value <= c.bound : c.value >= c.bound;
    c.status = ok ? BoundStatus::Pass : BoundStatus::Fail;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Exponential rate fit

struct RateFit {
  double omega = 0.0;      // decay rate
  double K = 0.0;          // amplitude
  double r_squared = 0.0;  // of the log-linear fit; 0 when ln y has no variance
  double t_lo = 0.0;
  double t_hi = 0.0;
  int samples = 0;
};

struct TimeWindow {
  double lo;
  double hi;
};

/// Least squares of ln y against t over the window; y ~ K exp(-omega t).
/// Without an explicit window the trailing half of the time span is used.
inline RateFit fit_exponential_rate(std::span<const double> t, std::span<const double> y,
                                    std::optional<TimeWindow> window = std::nullopt) {
  if (t.size() != y.size() || t.empty()) throw DomainError("rate fit needs matching, nonempty series");
  const TimeWindow w = window.value_or(TimeWindow{0.5 * (t.front() + t.back()), t.back()});

  std::vector<double> ts;
  std::vector<double> ls;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < w.lo || t[i] > w.hi) continue;
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw DomainError("rate fit needs strictly positive samples; y(" + std::to_string(t[i]) +
                        ") = " + std::to_string(y[i]));
    }
    ts.push_back(t[i]);
    ls.push_back(std::log(y[i]));
  }
  if (ts.size() < 8) {
    throw DomainError("rate fit needs at least 8 samples in the window, got " +
                      std::to_string(ts.size()));
  }
  const double count = static_cast<double>(ts.size());
  double t_mean = 0.0;
  double l_mean = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t_mean += ts[i];
    l_mean += ls[i];
  }
  t_mean /= count;
  l_mean /= count;
  double stt = 0.0;
  double stl = 0.0;
  double sll = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - t_mean) * (ts[i] - t_mean);
    stl += (ts[i] - t_mean) * (ls[i] - l_mean);
    sll += (ls[i] - l_mean) * (ls[i] - l_mean);
  }
  if (stt == 0.0) throw DomainError("rate fit needs distinct sample times");
  const double slope = stl / stt;
  const double intercept = l_mean - slope * t_mean;

  RateFit fit;
  fit.omega = -slope;
  fit.K = std::exp(intercept);
  fit.t_lo = w.lo;
  fit.t_hi = w.hi;
  fit.samples = static_cast<int>(ts.size());
  if (sll > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double r = ls[i] - (intercept + slope * ts[i]);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / sll, 0.0, 1.0);
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Hyperboloid-model oracle (curves only)
//
// The curve is embedded in {x : <x,x> = -1/|lambda|, x_0 > 0} of Minkowski
// space R^{1,2}, X = (c(rho)/k, s(rho) cos theta, s(rho) sin theta), and
// differentiated there. Nothing below uses the radial-graph formulas.

struct EmbeddedCurveFields {
  std::vector<double> curvature;       // geodesic curvature, positive for circles
  std::vector<double> length_element;  // |X'| per unit theta
  std::vector<double> support_cos;     // <N, d_r>
};

namespace detail {

using Vec3 = std::array<double, 3>;

inline double minkowski(const Vec3& a, const Vec3& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace detail

inline EmbeddedCurveFields hyperboloid_embedding_fields(const RadialGraph& g) {
  using detail::minkowski;
  using detail::Vec3;
  const Grid& grid = *g.grid();
  if (grid.topology() != Topology::Circle) {
    throw ConfigError("hyperboloid oracle supports circle grids only");
  }
  const auto& p = g.params();
  const double k = p.sqrt_abs_lambda();
  const int m = grid.size();
  const double h = grid.spacing();

  std::vector<Vec3> X(m);
  std::vector<Vec3> radial(m);
  for (int j = 0; j < m; ++j) {
    const double r = g.rho()[j];
    const double th = grid.node(j);
    const double ch = std::cosh(k * r);
    const double sh = std::sinh(k * r);
    X[j] = {ch / k, sh / k * std::cos(th), sh / k * std::sin(th)};
    radial[j] = {sh, ch * std::cos(th), ch * std::sin(th)};
  }

  EmbeddedCurveFields out;
  out.curvature.resize(m);
  out.length_element.resize(m);
  out.support_cos.resize(m);
  for (int j = 0; j < m; ++j) {
    const Vec3& prev = X[(j + m - 1) % m];
    const Vec3& next = X[(j + 1) % m];
    Vec3 d1{};
    Vec3 d2{};
    for (int i = 0; i < 3; ++i) {
      d1[i] = (next[i] - prev[i]) / (2.0 * h);
      d2[i] = (next[i] - 2.0 * X[j][i] + prev[i]) / (h * h);
    }
    // Lorentzian cross product diag(-1,1,1)(X x X') is orthogonal to X and X'.
    const Vec3& x = X[j];
    Vec3 normal{-(x[1] * d1[2] - x[2] * d1[1]), x[2] * d1[0] - x[0] * d1[2],
                x[0] * d1[1] - x[1] * d1[0]};
    const double nn = std::sqrt(minkowski(normal, normal));
    double orient = minkowski(normal, radial[j]) >= 0.0 ? 1.0 : -1.0;
    for (double& v : normal) v *= orient / nn;

    const double speed2 = minkowski(d1, d1);
    out.curvature[j] = -minkowski(d2, normal) / speed2;
    out.length_element[j] = std::sqrt(speed2);
    out.support_cos[j] = minkowski(normal, radial[j]);
  }
  return out;
}

/// Mean (geodesic) curvature of a curve computed in the hyperboloid model.
inline ScalarField hyperboloid_curvature_oracle(const RadialGraph& g) {
  return ScalarField(g.grid(), hyperboloid_embedding_fields(g).curvature);
}

}  // namespace hypflow
