#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hypflow/hyptrig.hpp"
#include "test_support.hpp"

using namespace hypflow;

namespace {

const LambdaParams kUnit(-1.0);

// High-precision reference values (30-digit evaluation, rounded to double).
constexpr double kSinh1 = 1.1752011936438014;
constexpr double kCosh1 = 1.5430806348152437;
constexpr double kBallVolumeN1R1 = 3.4122762652849023;   // 2 pi (cosh 1 - 1)
constexpr double kBallVolumeN2R1 = 5.1109327057082890;   // 4 pi int_0^1 sinh^2
constexpr double kBallVolumeN3R1 = 6.8757195882414267;   // 2 pi^2 int_0^1 sinh^3
constexpr double kBallVolumeN2R07L4 = 2.1174013863029397;  // lambda = -4, r = 0.7
constexpr double kXiForward1 = 1.6574544541530773;
constexpr double kXiForward25 = 3.1914584215635531;

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(LambdaParams, RejectsNonNegativeAndNonFinite) {
  EXPECT_THROW(LambdaParams(0.0), ConfigError);
  EXPECT_THROW(LambdaParams(1.0), ConfigError);
  EXPECT_THROW(LambdaParams(std::nan("")), ConfigError);
  EXPECT_THROW(LambdaParams(-INFINITY), ConfigError);
}

TEST(LambdaParams, SqrtAbsLambdaSquaresBack) {
  for (double l : {-1.0, -4.0, -0.3, -17.25}) {
    const LambdaParams p(l);
    EXPECT_NEAR(p.sqrt_abs_lambda() * p.sqrt_abs_lambda(), -l, 4e-16 * -l);
  }
  EXPECT_EQ(LambdaParams().lambda(), -1.0);
}

TEST(LambdaTrig, ZeroArgument) {
  const auto t = lambda_trig(0.0, kUnit);
  EXPECT_EQ(t.s, 0.0);
  EXPECT_EQ(t.c, 1.0);
  EXPECT_EQ(t.ta, 0.0);
  EXPECT_THROW(t.co(), DomainError);
  EXPECT_THROW(co_lambda(0.0, kUnit), DomainError);
}

TEST(LambdaTrig, ValuesAtOne) {
  const auto t = lambda_trig(1.0, kUnit);
  EXPECT_NEAR(t.s, kSinh1, 1e-15);
  EXPECT_NEAR(t.c, kCosh1, 1e-15);
  EXPECT_NEAR(t.ta, kSinh1 / kCosh1, 1e-15);
  EXPECT_NEAR(t.co(), kCosh1 / kSinh1, 1e-15);
  EXPECT_EQ(s_lambda(1.0, kUnit), t.s);
  EXPECT_EQ(c_lambda(1.0, kUnit), t.c);
}

TEST(LambdaTrig, RandomIdentities) {
  support::Rng rng(20261018);
  for (int i = 0; i < 1000; ++i) {
    const double t = rng.uniform(0.1, 10.0);
    const LambdaParams p(rng.integer(0, 1) ? -1.0 : -rng.uniform(0.05, 8.0));
    const LambdaParams p4(4.0 * p.lambda());
    const double s = s_lambda(t, p);
    const double c = c_lambda(t, p);
    // c^2 + lambda s^2 = 1, relative to the size of the cancelling terms.
    EXPECT_LE(std::abs(c * c + p.lambda() * s * s - 1.0) / (c * c), 1e-12) << t;
    EXPECT_LE(relative(c_lambda(t, p4), c * c - p.lambda() * s * s), 1e-12) << t;
    EXPECT_LE(relative(s_lambda(t, p4), s * c), 1e-12) << t;
    EXPECT_LE(relative(s_lambda(t, p), s_lambda(p.sqrt_abs_lambda() * t, kUnit) / p.sqrt_abs_lambda()), 1e-12);
    EXPECT_LE(relative(ta_lambda(t, p), s / c), 1e-12);
    EXPECT_LE(relative(co_lambda(t, p), c / s), 1e-12);
  }
}

TEST(UnitSphereVolume, LowDimensions) {
  EXPECT_NEAR(unit_sphere_volume(0), 2.0, 1e-14);
  EXPECT_NEAR(unit_sphere_volume(1), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_volume(2), 4.0 * std::numbers::pi, 1e-13);
  EXPECT_NEAR(unit_sphere_volume(3), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(BallVolume, ClosedFormReferences) {
  EXPECT_LE(relative(ball_volume(1.0, 1, kUnit), kBallVolumeN1R1), 1e-14);
  EXPECT_LE(relative(ball_volume(1.0, 2, kUnit), kBallVolumeN2R1), 1e-14);
  EXPECT_LE(relative(ball_volume(1.0, 3, kUnit), kBallVolumeN3R1), 1e-14);
  EXPECT_LE(relative(ball_volume(0.7, 2, LambdaParams(-4.0)), kBallVolumeN2R07L4), 1e-14);
  EXPECT_EQ(ball_volume(0.0, 2, kUnit), 0.0);
}

TEST(BallVolume, MatchesQuadratureOnBothBranches) {
  // Arguments on either side of the series / recursion switch.
  for (int n = 1; n <= 5; ++n) {
    for (double r : {1e-4, 0.1, 0.49, 0.51, 1.3, 3.0}) {
      const double oracle =
          unit_sphere_volume(n) * support::simpson([&](double x) { return std::pow(std::sinh(x), n); }, 0.0, r);
      EXPECT_LE(relative(ball_volume(r, n, kUnit), oracle), 1e-11) << n << " " << r;
    }
  }
}

TEST(Psi, ClosedFormInverseForCurves) {
  EXPECT_NEAR(psi(kBallVolumeN1R1, 1, kUnit), 1.0, 1e-10);
  EXPECT_NEAR(psi(2.0 * std::numbers::pi * (std::cosh(2.0) - 1.0), 1, kUnit), 2.0, 1e-10);
}

TEST(Psi, HigherDimensionReferences) {
  EXPECT_NEAR(psi(kBallVolumeN2R1, 2, kUnit), 1.0, 1e-10);
  EXPECT_NEAR(psi(kBallVolumeN3R1, 3, kUnit), 1.0, 1e-10);
  EXPECT_NEAR(psi(kBallVolumeN2R07L4, 2, LambdaParams(-4.0)), 0.7, 1e-10);
}

TEST(Psi, RejectsNonPositiveVolume) {
  EXPECT_THROW(psi(0.0, 1, kUnit), DomainError);
  EXPECT_THROW(psi(-1.0, 2, kUnit), DomainError);
  EXPECT_THROW(psi(std::nan(""), 2, kUnit), DomainError);
}

TEST(Psi, TendsToZeroWithVolume) {
  double prev = psi(1e-3, 2, kUnit);
  for (double v : {1e-6, 1e-9, 1e-12}) {
    const double r = psi(v, 2, kUnit);
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, prev);
    prev = r;
  }
  EXPECT_LT(psi(1e-12, 1, kUnit), 1e-5);
}

TEST(Psi, RoundTripAgainstQuadratureOracle) {
  support::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const int n = rng.integer(1, 4);
    const double r = rng.uniform(0.2, 3.0);
    const LambdaParams p(rng.integer(0, 1) ? -1.0 : -rng.uniform(0.25, 4.0));
    const double k = p.sqrt_abs_lambda();
    const double v = unit_sphere_volume(n) *
                     support::simpson([&](double x) { return std::pow(std::sinh(k * x) / k, n); }, 0.0, r, 20000);
    EXPECT_NEAR(psi(v, n, p), r, 1e-9) << n << " " << r << " " << p.lambda();
  }
}

TEST(Psi, StrictlyIncreasing) {
  for (int n = 1; n <= 3; ++n) {
    double prev = 0.0;
    for (double v = 0.05; v < 200.0; v *= 1.3) {
      const double r = psi(v, n, kUnit);
      EXPECT_GT(r, prev);
      prev = r;
    }
  }
}

TEST(Xi, ZeroAndDomain) {
  EXPECT_EQ(xi(0.0, kUnit), 0.0);
  EXPECT_THROW(xi(-0.1, kUnit), DomainError);
  EXPECT_THROW(xi(std::nan(""), kUnit), DomainError);
}

TEST(Xi, ForwardMapReferences) {
  EXPECT_NEAR(xi_forward(1.0, kUnit), kXiForward1, 1e-14);
  EXPECT_NEAR(xi_forward(2.5, kUnit), kXiForward25, 1e-14);
  EXPECT_NEAR(xi(kXiForward1, kUnit), 1.0, 1e-12);
  EXPECT_NEAR(xi(kXiForward25, kUnit), 2.5, 1e-12);
}

TEST(Xi, BelowIdentityAndIncreasing) {
  double prev = 0.0;
  for (double s = 0.01; s < 20.0; s *= 1.25) {
    const double x = xi(s, kUnit);
    EXPECT_LT(x, s);
    EXPECT_GT(x, prev);
    prev = x;
  }
}

TEST(Xi, RoundTripAgainstBisectionOracle) {
  support::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const double x = rng.uniform(0.1, 3.0);
    // Independent forward map written directly from its definition.
    auto forward = [](double y) {
      const double tau = std::tanh(0.5 * y);
      return y + std::log((1.0 + std::sqrt(tau)) * (1.0 + std::sqrt(tau)) / (1.0 + tau));
    };
    const double s = forward(x);
    EXPECT_NEAR(xi(s, kUnit), x, 1e-9);
    EXPECT_NEAR(support::bisect_increasing([&](double y) { return forward(y) - s; }, 0.0, s), x, 1e-9);
  }
}

TEST(Xi, InverseOfPsiBoundOrdering) {
  support::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double v = std::exp(rng.uniform(-8.0, 6.0));
    const int n = rng.integer(1, 3);
    const double outer = psi(v, n, kUnit);
    EXPECT_LE(xi(outer, kUnit), outer);
  }
}
