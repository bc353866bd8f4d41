#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hypflow/diagnostics.hpp"
#include "hypflow/flow.hpp"
#include "test_support.hpp"

using namespace hypflow;

namespace {

const LambdaParams kUnit(-1.0);
constexpr double kMarginUnitCircle = 0.31303528549933130;  // coth 1 - 1
constexpr double kCoth1 = 1.3130352854993313;
constexpr double kCoth5 = 1.0000908039820194;

RadialGraph wave(int m, double a, int k = 2) {
  return RadialGraph(ScalarField::sample(make_grid(Topology::Circle, 1, m),
                                         [&](double t) { return 1.0 + a * std::cos(k * t); }),
                     kUnit);
}

RadialGraph round_graph(int n, double r0, const LambdaParams& p = kUnit) {
  return RadialGraph(ScalarField::constant(Grid::for_dimension(n, 64), r0), p);
}

DiagnosticsRow row_for(const RadialGraph& g, double v0) { return make_row(FlowState::evaluate(g, 0.0), v0); }

}  // namespace

TEST(HConvexityMargin, UnitCircle) {
  EXPECT_NEAR(h_convexity_margin(round_graph(1, 1.0)), kMarginUnitCircle, 1e-14);
  EXPECT_NEAR(h_convexity_margin(round_graph(2, 1.0)), kMarginUnitCircle, 1e-14);
}

TEST(HConvexityMargin, HorosphereLimitFromAbove) {
  double prev = INFINITY;
  for (double R : {1.0, 3.0, 6.0, 12.0}) {
    const double m = h_convexity_margin(round_graph(1, R));
    EXPECT_GT(m, 0.0);
    EXPECT_LT(m, prev);
    prev = m;
  }
  EXPECT_LT(prev, 1e-10);
}

TEST(HConvexityMargin, DetectsDimple) {
  EXPECT_GT(h_convexity_margin(wave(256, 0.1)), 0.0);
  EXPECT_LT(h_convexity_margin(wave(256, 0.4)), 0.0);
  EXPECT_LT(h_convexity_margin(wave(256, 0.2)), 0.0);
}

TEST(CheckBounds, CenteredSpherePasses) {
  for (int n : {1, 2}) {
    for (double r0 : {0.5, 1.0, 2.0}) {
      auto g = round_graph(n, r0);
      const double v0 = enclosed_volume(g);
      const auto row = row_for(g, v0);
      EXPECT_NEAR(row.inradius_upper, r0, 1e-9 + (n == 1 ? 0.0 : 1e-3));
      EXPECT_LE(row.inradius_lower, row.inradius_upper);
      const auto report = check_bounds(row, g, v0);
      EXPECT_TRUE(report.applicable());
      EXPECT_TRUE(report.all_passed());
      EXPECT_EQ(report.checks.size(), 5u);
      EXPECT_TRUE(report.warnings.empty());
      const auto* support = report.find("support");
      ASSERT_NE(support, nullptr);
      EXPECT_EQ(support->value, 1.0);
      EXPECT_NEAR(support->bound, std::tanh(r0) - 5e-3, 1e-15);
    }
  }
}

TEST(CheckBounds, CircleValuesExact) {
  auto g = round_graph(1, 1.0);
  const double v0 = enclosed_volume(g);
  const auto report = check_bounds(row_for(g, v0), g, v0);
  EXPECT_NEAR(report.find("inradius_upper")->bound, 1.0 + 5e-3, 1e-12);
  EXPECT_NEAR(report.find("diameter")->value, 2.0, 1e-12);
  EXPECT_NEAR(report.find("diameter")->bound, 2.0 * (1.0 + std::log(2.0)) + 5e-3, 1e-12);
  EXPECT_EQ(report.find("nonexistent"), nullptr);
}

TEST(CheckBounds, PerturbedCirclePasses) {
  auto g = wave(256, 0.1);
  const double v0 = enclosed_volume(g);
  const auto report = check_bounds(row_for(g, v0), g, v0);
  EXPECT_TRUE(report.all_passed());
  for (const auto& c : report.checks) EXPECT_EQ(c.status, BoundStatus::Pass) << c.name;
}

TEST(CheckBounds, DetectsViolation) {
  // A volume far above the graph's own: the inradius lower bound fails.
  auto g = round_graph(1, 1.0);
  const double v0 = ball_volume(3.0, 1, kUnit);
  const auto report = check_bounds(row_for(g, v0), g, v0);
  EXPECT_FALSE(report.all_passed());
  EXPECT_EQ(report.find("inradius_lower")->status, BoundStatus::Fail);
}

TEST(CheckBounds, NotApplicableWithoutHConvexity) {
  auto g = wave(256, 0.4);
  const double v0 = enclosed_volume(g);
  const auto report = check_bounds(row_for(g, v0), g, v0);
  EXPECT_FALSE(report.applicable());
  EXPECT_TRUE(report.all_passed());
  for (const auto& c : report.checks) EXPECT_EQ(c.status, BoundStatus::NotApplicable);
  EXPECT_FALSE(report.warnings.empty());
}

TEST(CheckBounds, WarnsForNonUnitCurvature) {
  const LambdaParams p(-4.0);
  auto g = round_graph(1, 1.0, p);
  const double v0 = enclosed_volume(g);
  const auto report = check_bounds(row_for(g, v0), g, v0);
  EXPECT_FALSE(report.warnings.empty());
  EXPECT_TRUE(report.applicable());
}

TEST(CheckBounds, StatusNames) {
  EXPECT_STREQ(to_string(BoundStatus::Pass), "pass");
  EXPECT_STREQ(to_string(BoundStatus::Fail), "fail");
  EXPECT_STREQ(to_string(BoundStatus::NotApplicable), "n/a");
}

TEST(RateFit, ExactExponential) {
  std::vector<double> t;
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) {
    t.push_back(i);
    y.push_back(3.0 * std::exp(-0.5 * i));
  }
  const auto fit = fit_exponential_rate(t, y, TimeWindow{0.0, 9.0});
  EXPECT_NEAR(fit.omega, 0.5, 1e-10);
  EXPECT_NEAR(fit.K, 3.0, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-10);
  EXPECT_EQ(fit.samples, 10);
}

TEST(RateFit, DefaultWindowIsTrailingHalf) {
  std::vector<double> t;
  std::vector<double> y;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(0.25 * i);
    // Fast transient early, clean decay late.
    y.push_back(2.0 * std::exp(-0.3 * t.back()) + (t.back() < 3.0 ? 5.0 * std::exp(-4.0 * t.back()) : 0.0));
  }
  const auto fit = fit_exponential_rate(t, y);
  EXPECT_DOUBLE_EQ(fit.t_lo, 5.0);
  EXPECT_DOUBLE_EQ(fit.t_hi, 10.0);
  EXPECT_EQ(fit.samples, 21);
  EXPECT_NEAR(fit.omega, 0.3, 1e-10);
  EXPECT_NEAR(fit.K, 2.0, 1e-9);
}

TEST(RateFit, ConstantSeries) {
  std::vector<double> t(12);
  std::vector<double> y(12, 4.0);
  for (int i = 0; i < 12; ++i) t[i] = i;
  const auto fit = fit_exponential_rate(t, y, TimeWindow{0.0, 11.0});
  EXPECT_EQ(fit.omega, 0.0);
  EXPECT_EQ(fit.r_squared, 0.0);
  EXPECT_NEAR(fit.K, 4.0, 1e-12);
}

TEST(RateFit, RejectsUnusableSeries) {
  std::vector<double> t(12);
  std::vector<double> y(12, 1.0);
  for (int i = 0; i < 12; ++i) t[i] = i;
  EXPECT_THROW(fit_exponential_rate(t, y, TimeWindow{0.0, 5.0}), DomainError);  // 6 samples
  y[3] = 0.0;
  EXPECT_THROW(fit_exponential_rate(t, y, TimeWindow{0.0, 11.0}), DomainError);
  y[3] = -1.0;
  EXPECT_THROW(fit_exponential_rate(t, y, TimeWindow{0.0, 11.0}), DomainError);
  // The bad sample lies outside the window, so the fit is usable.
  EXPECT_NO_THROW(fit_exponential_rate(t, y, TimeWindow{4.0, 11.0}));
  std::vector<double> short_y(5, 1.0);
  EXPECT_THROW(fit_exponential_rate(t, short_y), DomainError);
}

TEST(RateFit, RSquaredInUnitIntervalForNoisyData) {
  support::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> t;
    std::vector<double> y;
    for (int i = 0; i < 30; ++i) {
      t.push_back(i);
      y.push_back(std::exp(-0.1 * i + rng.uniform(-1.0, 1.0)));
    }
    const auto fit = fit_exponential_rate(t, y, TimeWindow{0.0, 29.0});
    EXPECT_GE(fit.r_squared, 0.0);
    EXPECT_LE(fit.r_squared, 1.0);
  }
}

TEST(HyperboloidOracle, RoundCircles) {
  const auto unit = hyperboloid_curvature_oracle(round_graph(1, 1.0));
  for (double v : unit.vector()) EXPECT_NEAR(v, kCoth1, 5e-3);
  const auto large = hyperboloid_curvature_oracle(round_graph(1, 5.0));
  for (double v : large.vector()) EXPECT_NEAR(v, kCoth5, 5e-3);
  const auto f = hyperboloid_embedding_fields(round_graph(1, 1.0));
  for (double v : f.support_cos) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(HyperboloidOracle, SecondOrderAgreementWithFormula) {
  double d[3];
  double h[3];
  const int ms[3] = {64, 128, 256};
  for (int i = 0; i < 3; ++i) {
    auto g = wave(ms[i], 0.1);
    d[i] = support::sup_abs_diff(mean_curvature(g).vector(), hyperboloid_curvature_oracle(g).vector());
    h[i] = g.grid()->spacing();
  }
  EXPECT_LE(d[2], 5e-3);
  EXPECT_GE(support::observed_order(d[0], d[1], h[0], h[1]), 1.9);
  EXPECT_GE(support::observed_order(d[1], d[2], h[1], h[2]), 1.9);
}

TEST(HyperboloidOracle, CircleOnly) {
  EXPECT_THROW(hyperboloid_curvature_oracle(round_graph(2, 1.0)), ConfigError);
}

TEST(NodeDiameter, RoundAndOffset) {
  EXPECT_NEAR(node_diameter(round_graph(1, 0.7)), 1.4, 1e-12);
  EXPECT_NEAR(node_diameter(RadialGraph(ScalarField::constant(make_grid(Topology::Axisymmetric, 2, 33), 0.7), kUnit)),
              1.4, 1e-12);
  const double z[2] = {0.3, 0.0};
  auto g = offset_sphere_graph(make_grid(Topology::Circle, 1, 256), kUnit, 1.0, 0.2, z);
  EXPECT_NEAR(node_diameter(g), 2.4, 1e-3);
}
