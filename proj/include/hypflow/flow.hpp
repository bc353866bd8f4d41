#pragma once

// Time integration of mean curvature flow (MCF) and volume-preserving mean
// curvature flow (VPMCF) for radial graphs.
//
// In the fixed spherical coordinates of the grid origin the normal speed
// H_bar - H becomes the scalar equation
//
//   d rho/dt = s^{-2} (Lap_S rho - Hess_S rho(grad rho, grad rho) / |xi|^2)
//              - co(rho) (n + |grad rho|^2 / |xi|^2) + s^{-1} H_bar |xi|,
//
// with the H_bar term dropped for MCF.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hypflow/diagnostics.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/graph_geometry.hpp"
#include "hypflow/hyptrig.hpp"
#include "hypflow/integrals.hpp"
#include "hypflow/sphere_grid.hpp"

namespace hypflow {

enum class FlowMode { MCF, VPMCF };
enum class TimeScheme { ExplicitRK2, SemiImplicit };

inline const char* to_string(FlowMode m) { return m == FlowMode::MCF ? "mcf" : "vpmcf"; }
inline const char* to_string(TimeScheme s) {
  return s == TimeScheme::ExplicitRK2 ? "rk2" : "semi-implicit";
}

struct FlowConfig {
  FlowMode mode = FlowMode::VPMCF;
  TimeScheme scheme = TimeScheme::ExplicitRK2;
  std::optional<double> dt;  // fixed step; otherwise cfl * h^2 * s^2(min rho)
  double cfl = 0.25;
  double t_max = 10.0;
  bool renormalize_volume = false;
  std::optional<double> target_volume;  // defaults to the initial volume
  double stop_tolerance = 1e-12;        // on sup |H - H_bar|, VPMCF only
  double cadence = 0.1;
  double min_dt = 1e-10;  // adaptive steps below this signal a singularity

  void validate() const {
    if (dt && !(std::isfinite(*dt) && *dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfl > 0.0 && cfl <= 0.5)) throw ConfigError("cfl must lie in (0, 0.5]");
    if (!(std::isfinite(t_max) && t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (!(std::isfinite(cadence) && cadence > 0.0)) throw ConfigError("cadence must be positive");
    if (!(stop_tolerance >= 0.0)) throw ConfigError("stop tolerance must be nonnegative");
    if (!(min_dt > 0.0)) throw ConfigError("min_dt must be positive");
    if (target_volume && !(*target_volume > 0.0)) throw ConfigError("target volume must be positive");
    if (renormalize_volume && mode == FlowMode::MCF) {
      throw ConfigError("volume renormalization contradicts MCF mode");
    }
  }
};

/// A graph at time t with its cached integrals.
struct FlowState {
  double t = 0.0;
  RadialGraph graph;
  double area = 0.0;
  double volume = 0.0;
  double h_bar = 0.0;
  double sup_dev = 0.0;       // sup |H - H_bar|
  double kappa_margin = 0.0;  // min kappa - sqrt|lambda|
  double renorm_delta = 0.0;  // radial shift applied by the last renormalization

  static FlowState evaluate(RadialGraph graph, double t, double renorm_delta = 0.0) {
    const QuadratureRule q(graph.grid());
    const auto f = compute_geometry(graph);
    FlowState s{t, std::move(graph)};
    s.area = surface_area(q, f);
    s.volume = enclosed_volume(q, s.graph);
    s.h_bar = averaged_mean_curvature(q, f);
    for (double h : f.H) s.sup_dev = std::max(s.sup_dev, std::abs(h - s.h_bar));
    s.kappa_margin = h_convexity_margin(f, s.graph.params());
    s.renorm_delta = renorm_delta;
    return s;
  }
};

namespace detail {

inline std::vector<double> speed_from_geometry(const RadialGraph& g, const GeometryFields& f,
                                               FlowMode mode, const QuadratureRule& q) {
  const int m = g.size();
  const int n = g.dim();
  const double h_bar = mode == FlowMode::VPMCF ? averaged_mean_curvature(q, f) : 0.0;
  const auto& d = f.derivs;
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    const auto t = lambda_trig(g.rho()[j], g.params());
    const double xi2 = f.xi_norm[j] * f.xi_norm[j];
    const double tangential = d.lap[j] - d.d2[j] * f.grad_sq[j] / xi2;
    double v = tangential / (t.s * t.s) - t.co() * (n + f.grad_sq[j] / xi2);
    if (mode == FlowMode::VPMCF) v += h_bar * f.xi_norm[j] / t.s;
    out[j] = v;
  }
  return out;
}

/// New radii on g's grid, rejected unless finite and positive everywhere.
inline RadialGraph checked_graph(const RadialGraph& g, std::vector<double> rho, double t) {
  for (double r : rho) {
    if (!std::isfinite(r)) throw NumericalError("flow blew up (non-finite radius)", t);
    if (!(r > 0.0)) throw NumericalError("radius reached zero (singularity)", t);
  }
  return g.with_rho(std::move(rho));
}

/// rho + dt * k.
inline RadialGraph advance(const RadialGraph& g, std::span<const double> k, double dt, double t) {
  const auto base = g.rho().values();
  std::vector<double> next(base.size());
  for (std::size_t j = 0; j < next.size(); ++j) next[j] = base[j] + dt * k[j];
  return checked_graph(g, std::move(next), t);
}

// Solves a tridiagonal system in place: lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
inline void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                              std::vector<double> upper, std::vector<double>& x) {
  const std::size_t m = diag.size();
  for (std::size_t i = 1; i < m; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    x[i] -= w * x[i - 1];
  }
  x[m - 1] /= diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = (x[i] - upper[i] * x[i + 1]) / diag[i];
}

// Periodic variant (corner entries lower[0], upper[m-1]) via Sherman-Morrison.
inline void solve_cyclic_tridiagonal(const std::vector<double>& lower, std::vector<double> diag,
                                     const std::vector<double>& upper, std::vector<double>& x) {
  const std::size_t m = diag.size();
  const double alpha = upper[m - 1];  // row m-1, column 0
  const double beta = lower[0];       // row 0, column m-1
  const double gamma = -diag[0];
  diag[0] -= gamma;
  diag[m - 1] -= alpha * beta / gamma;
  std::vector<double> u(m, 0.0);
  u[0] = gamma;
  u[m - 1] = alpha;
  solve_tridiagonal(lower, diag, upper, x);
  solve_tridiagonal(lower, diag, upper, u);
  const double fact = (x[0] + beta * x[m - 1] / gamma) / (1.0 + u[0] + beta * u[m - 1] / gamma);
  for (std::size_t i = 0; i < m; ++i) x[i] -= fact * u[i];
}

// One linearly implicit Euler step: the s^{-2} Lap_S rho part uses frozen
// coefficients and is taken implicitly, the rest explicitly.
inline std::vector<double> semi_implicit_update(const RadialGraph& g, std::span<const double> speed,
                                                std::span<const double> lap, double dt) {
  const Grid& grid = *g.grid();
  const int m = grid.size();
  const int n = grid.dim();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  std::vector<double> lower(m, 0.0);
  std::vector<double> diag(m, 0.0);
  std::vector<double> upper(m, 0.0);
  std::vector<double> x(m);
  for (int j = 0; j < m; ++j) {
    const double s = s_lambda(g.rho()[j], g.params());
    const double a = dt / (s * s);
    x[j] = g.rho()[j] + dt * speed[j] - a * lap[j];
    if (grid.topology() == Topology::Circle) {
      lower[j] = -a * inv_h2;
      upper[j] = -a * inv_h2;
      diag[j] = 1.0 + 2.0 * a * inv_h2;
    } else if (j == 0 || j == m - 1) {
      const double off = -a * 2.0 * n * inv_h2;
      (j == 0 ? upper[j] : lower[j]) = off;
      diag[j] = 1.0 - off;
    } else {
      const double cot = std::cos(grid.node(j)) / std::sin(grid.node(j));
      const double drift = (n - 1) * cot / (2.0 * h);
      lower[j] = -a * (inv_h2 - drift);
      upper[j] = -a * (inv_h2 + drift);
      diag[j] = 1.0 + 2.0 * a * inv_h2;
    }
  }
  if (grid.topology() == Topology::Circle) {
    solve_cyclic_tridiagonal(lower, diag, upper, x);
  } else {
    solve_tridiagonal(lower, diag, upper, x);
  }
  return x;
}

}  // namespace detail

/// Right-hand side d rho / dt of the graph equation.
inline ScalarField rhs(const RadialGraph& g, FlowMode mode) {
  const QuadratureRule q(g.grid());
  return ScalarField(g.grid(), detail::speed_from_geometry(g, compute_geometry(g), mode, q));
}

/// Adaptive step of the explicit scheme: cfl * h^2 * s^2(min rho).
inline double stable_dt(const RadialGraph& g, double cfl) {
  const double h = g.grid()->spacing();
  const double s = s_lambda(g.rho().min(), g.params());
  return cfl * h * h * s * s;
}

/// Shifts rho uniformly so that the enclosed volume equals v_target.
inline FlowState renormalize_volume(const FlowState& state, double v_target) {
  if (!(v_target > 0.0)) throw ConfigError("target volume must be positive");
  const RadialGraph& g = state.graph;
  const QuadratureRule q(g.grid());
  const int n = g.dim();
  const auto& p = g.params();
  const auto rho = g.rho().values();

  auto volume_at = [&](double delta) {
    std::vector<double> radial(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) radial[j] = radial_volume_integral(rho[j] + delta, n, p);
    return q.integrate(radial);
  };
  auto slope_at = [&](double delta) {
    std::vector<double> dens(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) dens[j] = std::pow(s_lambda(rho[j] + delta, p), n);
    return q.integrate(dens);
  };

  const double v_now = volume_at(0.0);
  if (std::abs(v_now - v_target) > 0.5 * v_target) {
    throw NumericalError("volume drifted more than 50% from its target", state.t);
  }
  double delta = 0.0;
  if (v_now != v_target) {
    // Monotone in delta; bracket, then safeguarded Newton.
    const double rho_min = g.rho().min();
    const double rho_max = g.rho().max();
    double lo = v_now < v_target ? 0.0 : -rho_min * (1.0 - 1e-12);
    double hi = v_now < v_target ? rho_min : 0.0;
    if (v_now < v_target) {
      for (int it = 0; volume_at(hi) < v_target; ++it) {
        if (it > 60) throw NumericalError("volume renormalization bracket failed", state.t);
        lo = hi;
        hi *= 2.0;
      }
    } else if (volume_at(lo) > v_target) {
      throw NumericalError("volume renormalization bracket failed", state.t);
    }
    for (int it = 0; it < 200; ++it) {
      const double f = volume_at(delta) - v_target;
      if (f == 0.0) break;
      (f < 0.0 ? lo : hi) = delta;
      double next = delta - f / slope_at(delta);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      // Corrections below the resolution of rho are dropped, so renormalizing
      // an already renormalized state leaves it unchanged.
      const double resolution = std::numeric_limits<double>::epsilon() * rho_max;
      if (std::abs(next - delta) <= resolution || hi - lo <= resolution) break;
      delta = next;
    }
  }
  std::vector<double> shifted(rho.begin(), rho.end());
  if (delta != 0.0) {
    for (double& r : shifted) r += delta;
  }
  return FlowState::evaluate(g.with_rho(std::move(shifted)), state.t, delta);
}

/// Advances the state by dt with the configured scheme; renormalizes the
/// volume afterwards when requested.
inline FlowState step(const FlowState& state, double dt, const FlowConfig& config) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("time step must be positive");
  const RadialGraph& g = state.graph;
  const QuadratureRule q(g.grid());
  const double t = state.t;

  RadialGraph next = g;
  if (config.scheme == TimeScheme::ExplicitRK2) {
    const auto k1 = detail::speed_from_geometry(g, compute_geometry(g), config.mode, q);
    const RadialGraph stage = detail::advance(g, k1, dt, t);
    const auto k2 = detail::speed_from_geometry(stage, compute_geometry(stage), config.mode, q);
    std::vector<double> avg(k1.size());
    for (std::size_t j = 0; j < avg.size(); ++j) avg[j] = 0.5 * (k1[j] + k2[j]);
    next = detail::advance(g, avg, dt, t);
  } else {
    const auto f = compute_geometry(g);
    const auto speed = detail::speed_from_geometry(g, f, config.mode, q);
    next = detail::checked_graph(g, detail::semi_implicit_update(g, speed, f.derivs.lap, dt), t);
  }

  FlowState out = FlowState::evaluate(std::move(next), t + dt);
  if (config.renormalize_volume) {
    if (!config.target_volume) throw ConfigError("volume renormalization needs a target volume");
    out = renormalize_volume(out, *config.target_volume);
  }
  return out;
}

/// Time at which a geodesic sphere of radius r0 shrinks to a point under MCF.
inline double mcf_extinction_time(double r0, int n, const LambdaParams& p) {
  return std::log(c_lambda(r0, p)) / (-p.lambda() * n);
}

/// Radius at time t of a geodesic sphere of initial radius r0 under MCF:
/// c(r(t)) = exp(lambda n t) c(r0).
inline double exact_mcf_sphere(double r0, double t, int n, const LambdaParams& p) {
  const double extinction = mcf_extinction_time(r0, n, p);
  if (t >= extinction) {
    throw DomainError("sphere of radius " + std::to_string(r0) + " is extinct at t = " +
                      std::to_string(extinction));
  }
  const double c = std::exp(p.lambda() * n * t) * c_lambda(r0, p);
  return std::acosh(c) / p.sqrt_abs_lambda();
}

struct Trajectory {
  std::vector<FlowState> snapshots;  // one per cadence tick
  std::vector<DiagnosticsRow> rows;
  double target_volume = 0.0;         // V0
  std::string termination;            // "t_max", "converged" or the failure message
  long steps = 0;
  double max_area_increase = 0.0;     // largest single-step increase of the area
  double max_abs_renorm_delta = 0.0;
  std::optional<FlowState> final_state;  // last state reached, also after a failure
};

inline DiagnosticsRow make_row(const FlowState& s, double v0) {
  DiagnosticsRow r;
  r.t = s.t;
  r.area = s.area;
  r.volume = s.volume;
  r.h_bar = s.h_bar;
  r.sup_dev = s.sup_dev;
  r.kappa_margin = s.kappa_margin;
  r.rho_min = s.graph.rho().min();
  r.rho_max = s.graph.rho().max();
  r.inradius_upper = psi(v0, s.graph.dim(), s.graph.params());
  r.inradius_lower = xi(r.inradius_upper, s.graph.params());
  r.renorm_delta = s.renorm_delta;
  return r;
}

using StepObserver = std::function<void(const FlowState& before, const FlowState& after)>;

/// Integrates from `initial` at time t0 to config.t_max (absolute time),
/// appending snapshots and rows to `out` as it goes. Rows are taken at the
/// integer multiples of the cadence (and at t0). A NumericalError leaves the
/// rows recorded so far in `out`.
inline void run_into(Trajectory& out, const RadialGraph& initial, const FlowConfig& config_in,
                     double t0 = 0.0, const StepObserver& observer = {}) {
  FlowConfig config = config_in;
  config.validate();
  if (!(t0 < config.t_max)) throw ConfigError("start time must precede t_max");

  FlowState state = FlowState::evaluate(initial, t0);
  if (!config.target_volume) config.target_volume = state.volume;
  out.target_volume = *config.target_volume;
  if (config.renormalize_volume && state.volume != out.target_volume) {
    state = renormalize_volume(state, out.target_volume);
  }

  auto record = [&](const FlowState& s) {
    out.rows.push_back(make_row(s, out.target_volume));
    out.snapshots.push_back(s);
  };
  auto converged = [&](const FlowState& s) {
    return config.mode == FlowMode::VPMCF && s.sup_dev <= config.stop_tolerance;
  };

  const double cadence = config.cadence;
  const double snap = 1e-9 * cadence;
  auto tick_time = [&](long k) {
    const double tk = static_cast<double>(k) * cadence;
    return std::abs(tk - config.t_max) <= snap ? config.t_max : tk;
  };
  long next_tick = static_cast<long>(std::floor(t0 / cadence + 1e-9)) + 1;

  record(state);
  out.final_state = state;
  if (converged(state)) {
    out.termination = "converged";
    return;
  }

  try {
  while (true) {
    const double tick = tick_time(next_tick);
    const bool at_tick = tick <= config.t_max;
    const double target = at_tick ? tick : config.t_max;
    while (state.t < target) {
      double dt = config.dt ? *config.dt : stable_dt(state.graph, config.cfl);
      const double remaining = target - state.t;
      const bool landing = dt >= remaining * (1.0 - 1e-12);
      if (landing) {
        dt = remaining;
      } else if (!config.dt && dt < config.min_dt) {
        throw NumericalError("time step underflow near a singularity", state.t);
      }
      FlowState next = step(state, dt, config);
      if (landing) next.t = target;
      ++out.steps;
      out.max_area_increase = std::max(out.max_area_increase, next.area - state.area);
      out.max_abs_renorm_delta = std::max(out.max_abs_renorm_delta, std::abs(next.renorm_delta));
      if (observer) observer(state, next);
      state = std::move(next);
    }
    if (at_tick) {
      record(state);
      ++next_tick;
      if (converged(state)) {
        out.final_state = state;
        out.termination = "converged";
        return;
      }
    }
    if (state.t >= config.t_max) break;
  }
  } catch (const NumericalError& e) {
    out.final_state = state;
    out.termination = std::string("numerical failure: ") + e.what();
    throw;
  }
  out.final_state = state;
  out.termination = "t_max";
}

inline Trajectory run(const RadialGraph& initial, const FlowConfig& config, double t0 = 0.0,
                      const StepObserver& observer = {}) {
  Trajectory out;
  run_into(out, initial, config, t0, observer);
  return out;
}

}  // namespace hypflow
