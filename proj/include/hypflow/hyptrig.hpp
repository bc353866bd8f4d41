#pragma once

// Trigonometry of the hyperbolic space of constant curvature lambda < 0, and
// the volume / inradius functions built on it.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "hypflow/errors.hpp"

namespace hypflow {

/// Ambient sectional curvature lambda < 0 together with sqrt(|lambda|).
class LambdaParams {
 public:
  explicit LambdaParams(double lambda = -1.0) : lambda_(lambda) {
    if (!std::isfinite(lambda) || !(lambda < 0.0)) {
      throw ConfigError("ambient curvature must be finite and negative, got " +
                        std::to_string(lambda));
    }
    sqrt_abs_lambda_ = std::sqrt(-lambda);
  }

  double lambda() const noexcept { return lambda_; }
  double sqrt_abs_lambda() const noexcept { return sqrt_abs_lambda_; }

  friend bool operator==(const LambdaParams&, const LambdaParams&) = default;

 private:
  double lambda_;
  double sqrt_abs_lambda_;
};

inline double s_lambda(double t, const LambdaParams& p) {
  const double k = p.sqrt_abs_lambda();
  return std::sinh(k * t) / k;
}

inline double c_lambda(double t, const LambdaParams& p) {
  return std::cosh(p.sqrt_abs_lambda() * t);
}

inline double ta_lambda(double t, const LambdaParams& p) {
  const double k = p.sqrt_abs_lambda();
  return std::tanh(k * t) / k;
}

inline double co_lambda(double t, const LambdaParams& p) {
  if (t == 0.0) throw DomainError("co_lambda has a pole at t = 0");
  return c_lambda(t, p) / s_lambda(t, p);
}

/// s, c and ta at one argument; co is evaluated on demand because it has a pole at 0.
struct LambdaTrig {
  double s;
  double c;
  double ta;

  double co() const {
    if (s == 0.0) throw DomainError("co_lambda has a pole at t = 0");
    return c / s;
  }
};

inline LambdaTrig lambda_trig(double t, const LambdaParams& p) {
  const double k = p.sqrt_abs_lambda();
  const double s = std::sinh(k * t) / k;
  const double c = std::cosh(k * t);
  return {s, c, s / c};
}

/// Volume of the unit sphere S^n in R^{n+1}.
inline double unit_sphere_volume(int n) {
  const double half = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace detail {

// \int_0^y sinh^n(x) dx.
inline double sinh_power_integral(double y, int n) {
  if (y == 0.0) return 0.0;
  if (y < 0.5) {
    // Power series: sinh(x)/x = sum_j x^{2j}/(2j+1)!, raised to the n-th power.
    constexpr int kTerms = 15;
    std::array<double, kTerms> base{};
    double fact = 1.0;
    for (int j = 0; j < kTerms; ++j) {
      if (j > 0) fact *= (2.0 * j) * (2.0 * j + 1.0);
      base[j] = 1.0 / fact;
    }
    std::array<double, kTerms> power{};
    power[0] = 1.0;
    for (int e = 0; e < n; ++e) {
      std::array<double, kTerms> next{};
      for (int a = 0; a < kTerms; ++a)
        for (int b = 0; a + b < kTerms; ++b) next[a + b] += power[a] * base[b];
      power = next;
    }
    const double y2 = y * y;
    double sum = 0.0;
    double ypow = std::pow(y, n + 1);
    for (int j = 0; j < kTerms; ++j) {
      sum += power[j] * ypow / (n + 2 * j + 1);
      ypow *= y2;
    }
    return sum;
  }
  // Reduction I_n = sinh^{n-1} cosh / n - (n-1)/n I_{n-2}.
  double lower = (n % 2 == 0) ? y : 2.0 * std::pow(std::sinh(0.5 * y), 2);
  const double sh = std::sinh(y);
  const double ch = std::cosh(y);
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) {
    lower = std::pow(sh, k - 1) * ch / k - (k - 1.0) / k * lower;
  }
  return lower;
}

}  // namespace detail

/// \int_0^ell s_lambda^n(s) ds, the radial factor of the volume of a star-shaped domain.
inline double radial_volume_integral(double ell, int n, const LambdaParams& p) {
  const double k = p.sqrt_abs_lambda();
  return detail::sinh_power_integral(k * ell, n) / std::pow(k, n + 1);
}

/// Volume of a geodesic ball of radius r in the (n+1)-dimensional space.
inline double ball_volume(double r, int n, const LambdaParams& p) {
  return unit_sphere_volume(n) * radial_volume_integral(r, n, p);
}

/// Radius of the geodesic ball of volume v0 (inverse of ball_volume).
inline double psi(double v0, int n, const LambdaParams& p) {
  if (!std::isfinite(v0) || !(v0 > 0.0)) {
    throw DomainError("psi requires a positive volume, got " + std::to_string(v0));
  }
  const double k = p.sqrt_abs_lambda();
  if (n == 1) {
    // 2 pi (cosh(k s) - 1) / |lambda| = v0, solved without cancellation.
    const double x = -p.lambda() * v0 / (2.0 * std::numbers::pi);
    return 2.0 * std::asinh(std::sqrt(0.5 * x)) / k;
  }
  const double area = unit_sphere_volume(n);
  double lo = 0.0;
  double hi = 1.0 / k;
  while (ball_volume(hi, n, p) < v0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-8 * hi) {
    const double mid = 0.5 * (lo + hi);
    (ball_volume(mid, n, p) < v0 ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double f = ball_volume(r, n, p) - v0;
    const double df = area * std::pow(s_lambda(r, p), n);
    const double next = r - f / df;
    if (!(std::abs(next - r) <= hi - lo) || next == r) break;
    r = next;
  }
  return r;
}

/// The amount by which the farthest boundary point of an h-convex domain of
/// inradius rho may exceed rho:  sqrt|lambda| ln((1+sqrt(tau))^2 / (1+tau)),
/// tau = ta_lambda(rho/2).
inline double maxd_excess(double rho, const LambdaParams& p) {
  const double tau = ta_lambda(0.5 * rho, p);
  const double root = std::sqrt(tau);
  return p.sqrt_abs_lambda() * (2.0 * std::log1p(root) - std::log1p(tau));
}

/// The map x -> x + maxd_excess(x), whose inverse is xi.
inline double xi_forward(double x, const LambdaParams& p) { return x + maxd_excess(x, p); }

/// Inverse of xi_forward: the smallest inradius compatible with an outer radius s.
inline double xi(double s, const LambdaParams& p) {
  if (!std::isfinite(s) || s < 0.0) {
    throw DomainError("xi requires a nonnegative length, got " + std::to_string(s));
  }
  if (s == 0.0) return 0.0;
  double lo = 0.0;
  double hi = s;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (xi_forward(mid, p) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hypflow
