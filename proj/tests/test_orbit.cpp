#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bykov/orbit.hpp"
#include "bykov/regime.hpp"
#include "bykov/singular_limit.hpp"

using namespace bykov;

namespace {

const double kLn2 = std::numbers::ln2;

Matrix2 rotation(double t) {
  Matrix2 R;
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return R;
}

}  // namespace

TEST(Iterate, LambdaZeroSuperexponentialCollapse) {
  const Model m(reference_params(1.0, 0.0), Perturbation::reference());
  const OrbitRecord r = iterate(m, {1.0, 0.9}, 4);
  ASSERT_EQ(r.points.size(), 4u);
  EXPECT_EQ(r.points[0].y, 0.9);
  EXPECT_NEAR(r.points[1].y, std::pow(0.9, 6.0), 1e-15);
  EXPECT_NEAR(r.points[2].y, std::pow(0.9, 36.0), 1e-16);
  EXPECT_NEAR(r.points[3].y / std::pow(0.9, 216.0), 1.0, 1e-12);
  // x decouples: x1 = x0 − K ln y0.
  EXPECT_LE(circle_distance(r.points[1].x, wrap_angle(1.0 - 3.0 * std::log(0.9))), 1e-14);
}

TEST(Iterate, EscapeIsData) {
  const Model m(reference_params(1.0, 0.1), Perturbation::constant(1.0));
  const OrbitRecord r = iterate(m, {0.0, -0.2}, 100);
  EXPECT_TRUE(r.escaped);
  EXPECT_EQ(r.escape_index, 0);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.escape_point.y, -0.2);
}

TEST(Iterate, BurnInOffset) {
  const Model m(reference_params(1.0, 1e-2), Perturbation::reference());
  const OrbitRecord a = iterate(m, {1.0, 0.5}, 20, 0);
  const OrbitRecord b = iterate(m, {1.0, 0.5}, 10, 10);
  ASSERT_EQ(b.points.size(), 10u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(a.points[10 + i].x, b.points[i].x);
    EXPECT_EQ(a.points[10 + i].y, b.points[i].y);
  }
}

TEST(Lyapunov, DiagonalHarness) {
  LyapunovAccumulator acc;
  Matrix2 D;
  D << 2.0, 0.0, 0.0, 0.5;
  for (int i = 0; i < 1000; ++i) acc.push(D);
  const LyapunovEstimate e = acc.estimate();
  EXPECT_NEAR(e.chi1, kLn2, 1e-10);
  EXPECT_NEAR(e.chi2, -kLn2, 1e-10);
}

TEST(Lyapunov, ConjugatedNonNormalHarness) {
  // S diag(3, 1/5) S⁻¹ with a sheared S: exponents ln 3 and −ln 5.
  Matrix2 S;
  S << 1.0, 4.0, 0.2, 1.5;
  Matrix2 D;
  D << 3.0, 0.0, 0.0, 0.2;
  const Matrix2 A = S * D * S.inverse();
  LyapunovAccumulator acc;
  for (int i = 0; i < 4000; ++i) acc.push(A);
  const LyapunovEstimate e = acc.estimate();
  EXPECT_NEAR(e.chi1, std::log(3.0), 1e-3);
  EXPECT_NEAR(e.chi2, std::log(0.2), 1e-3);
}

TEST(Lyapunov, RotationsHaveZeroExponents) {
  LyapunovAccumulator acc(7);
  for (int i = 0; i < 1003; ++i) acc.push(rotation(0.1 * i));
  const LyapunovEstimate e = acc.estimate();
  EXPECT_NEAR(e.chi1, 0.0, 1e-12);
  EXPECT_NEAR(e.chi2, 0.0, 1e-12);
}

TEST(Lyapunov, LambdaZeroSaturates) {
  const Model m(reference_params(1.0, 0.0), Perturbation::reference());
  const LyapunovEstimate e = lyapunov(m, {1.0, 0.5}, 10000, {10, 10});
  EXPECT_TRUE(e.chi2_saturated || e.collapsed);
  EXPECT_EQ(e.chi2, kSaturatedNegative);
}

TEST(Lyapunov, DeterminantConsistencyOnModel) {
  const Model m(params_for_twist(5.0, 1e-3), Perturbation::reference());
  const LyapunovEstimate e = lyapunov(m, {1.0, 5e-4}, 100000);
  ASSERT_FALSE(e.inconclusive);
  EXPECT_GE(e.chi1, e.chi2);
  EXPECT_LE(e.determinant_residual(), 1e-2);
  EXPECT_THROW(lyapunov(m, {1.0, 5e-4}, 100), std::invalid_argument);
}

TEST(Birkhoff, ConstantObservable) {
  const Model m(params_for_twist(5.0, 1e-3), Perturbation::reference());
  const OrbitRecord r = iterate(m, {1.0, 5e-4}, 5000, 100);
  const BirkhoffAverage b = birkhoff_average(r, [](const Point&) { return 2.5; });
  EXPECT_EQ(b.value, 2.5);
  EXPECT_EQ(b.drift, 0.0);
  EXPECT_FALSE(b.partial);
}

TEST(Autocorrelation, IidSeriesIsUncorrelated) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> s(200000);
  for (double& v : s) v = g(rng);
  const Autocorrelation a = autocorrelation(s, 20);
  EXPECT_DOUBLE_EQ(a.rho[0], 1.0);
  for (int k = 1; k <= 20; ++k) EXPECT_LE(std::abs(a.rho[k]), a.noise_floor) << k;
}

TEST(Autocorrelation, Ar1RecoversRate) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> s(200000);
  double v = 0.0;
  for (double& out : s) out = v = 0.6 * v + g(rng);
  const Autocorrelation a = autocorrelation(s, 20);
  EXPECT_NEAR(a.tau, 0.6, 0.02);
  EXPECT_FALSE(a.poor_fit);
  EXPECT_GT(a.r_squared, 0.95);
}

TEST(Autocorrelation, PeriodicSeriesFlaggedPoor) {
  std::vector<double> s(2000);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const Autocorrelation a = autocorrelation(s, 10);
  EXPECT_NEAR(a.rho[2], 1.0, 1e-2);
  EXPECT_NEAR(a.rho[1], -1.0, 1e-2);
  EXPECT_TRUE(a.poor_fit);
}

TEST(Autocorrelation, ConstantSeriesUndefined) {
  const Autocorrelation a = autocorrelation(std::vector<double>(500, 4.0), 10);
  EXPECT_TRUE(a.undefined);
  EXPECT_THROW(autocorrelation(std::vector<double>(50, 1.0), 10), std::invalid_argument);
}

TEST(Period, DetectsCycleAndThickness) {
  std::vector<Point> pts;
  for (int i = 0; i < 300; ++i) pts.push_back({static_cast<double>(i % 3), 0.1 * (i % 3)});
  EXPECT_EQ(detect_period(pts, 64, 1e-8), 3);
  pts.back().y += 1e-3;
  EXPECT_EQ(detect_period(pts, 64, 1e-8), 0);

  std::vector<Point> curve;
  for (int i = 0; i < 4096; ++i) {
    const double x = kTwoPi * i / 4096.0;
    curve.push_back({x, 0.5 + 0.2 * std::sin(x)});
  }
  EXPECT_LT(transverse_thickness(curve, 64), 0.05);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> cloud;
  for (int i = 0; i < 4096; ++i) cloud.push_back({kTwoPi * u(rng), u(rng)});
  EXPECT_GT(transverse_thickness(cloud, 64), 0.3);
}

TEST(Rotation, InvariantCurveHasNarrowInterval) {
  const Model m(params_for_twist(0.25, 1e-3), Perturbation::reference());
  const long n = 20000;
  const RotationSet r = rotation_set_2d(m, {{0.0, 5e-4}, {2.0, 1e-3}, {4.0, 2e-4}}, n);
  ASSERT_TRUE(r.valid);
  EXPECT_LE(r.width(), 2.0 / n);
}

TEST(Rotation, ChaoticIntervalIsWide) {
  const Model m(params_for_twist(15.0, 1e-3), Perturbation::reference());
  std::vector<Point> seeds;
  for (int i = 0; i < 16; ++i) seeds.push_back({kTwoPi * i / 16.0, 5e-4});
  const RotationSet r = rotation_set_2d(m, seeds, 2000, 100);
  ASSERT_TRUE(r.valid);
  EXPECT_GT(r.width(), 0.05);
}

TEST(Rotation, RequiresPositiveLambda) {
  const Model m(reference_params(1.0, 0.0), Perturbation::reference());
  EXPECT_THROW(rotation_set_2d(m, {{1.0, 0.5}}, 100), std::invalid_argument);
}

TEST(Classify, SmallTwistIsInvariantCurve) {
  for (double K : {0.25, 0.31}) {
    const RegimeCell c = classify_cell(1e-3, K, reference_params(), Perturbation::reference());
    EXPECT_EQ(c.label, RegimeLabel::InvariantCurve) << K;
    EXPECT_LE(std::abs(c.chi1), 5e-3) << K;
  }
}

TEST(Classify, ThirdTongueAtSmallTwist) {
  // K_ω = 0.3 lies in the 1/3 phase-locking tongue of the invariant curve.
  const RegimeCell c = classify_cell(1e-3, 0.3, reference_params(), Perturbation::reference());
  EXPECT_EQ(c.label, RegimeLabel::PeriodicSink);
  EXPECT_EQ(c.period, 3);
  const Model m(params_for_twist(0.3, 1e-3), Perturbation::reference());
  const OrbitRecord r = iterate(m, {1.0, 0.5}, 9, 100000);
  for (int i = 0; i + 3 < 9; ++i) {
    EXPECT_LE(circle_distance(r.points[i].x, r.points[i + 3].x), 1e-8);
    EXPECT_NEAR(r.points[i].y, r.points[i + 3].y, 1e-10);
  }
  EXPECT_GT(circle_distance(r.points[0].x, r.points[1].x), 1e-3);
}

TEST(Classify, LargeTwistIsStrangeAttractorCandidate) {
  const RegimeCell c = classify_cell(1e-3, 15.0, reference_params(), Perturbation::reference());
  EXPECT_EQ(c.label, RegimeLabel::StrangeAttractorCandidate);
  EXPECT_GT(c.chi1, 5e-3);
}

TEST(Classify, MatchedPullbackIsPeriodTwoSink) {
  // a* = 1.104239 is a prime period-2 superstable parameter of h_a at K_ω = 5.
  const double a_star = 1.104239;
  const double lambda = lambda_sequences(5.0, 1, a_star).lambda_a_n;
  Budget b;
  b.seed = {4.7324, 0.5};
  const RegimeCell c = classify_cell(lambda, 5.0, reference_params(), Perturbation::reference(), b);
  EXPECT_EQ(c.label, RegimeLabel::PeriodicSink);
  EXPECT_EQ(c.period, 2);
  EXPECT_LT(c.chi1, -b.chi_threshold);
}

TEST(Classify, PeriodImpliesNegativeExponent) {
  const ScanResult s = scan({{1e-3}, {0.5, 0.75, 1.0, 2.0, 3.0}}, reference_params(),
                            Perturbation::reference(), {2000, 20000});
  for (const RegimeCell& c : s.cells) {
    if (c.period > 0) {
      EXPECT_LT(c.chi1, 0.0) << c.K_omega;
    }
  }
}

TEST(Classify, StableUnderBurnInDoubling) {
  for (double K : {0.3, 15.0}) {
    Budget b;
    const RegimeLabel l1 = classify_cell(1e-3, K, reference_params(), Perturbation::reference(), b).label;
    b.burn_in *= 2;
    const RegimeLabel l2 = classify_cell(1e-3, K, reference_params(), Perturbation::reference(), b).label;
    EXPECT_EQ(l1, l2) << K;
  }
}

TEST(Scan, ShapeAndThreadIndependence) {
  const ScanGrid grid{{1e-4, 1e-3, 1e-2}, {0.3, 5.0}};
  const Budget b{1000, 10000};
  const ScanResult one = scan(grid, reference_params(), Perturbation::reference(), b, 1);
  const ScanResult three = scan(grid, reference_params(), Perturbation::reference(), b, 3);
  ASSERT_EQ(one.cells.size(), 6u);
  EXPECT_EQ(one.t1_hat.size(), 2u);
  for (std::size_t i = 0; i < one.cells.size(); ++i) {
    EXPECT_EQ(one.cells[i].label, three.cells[i].label);
    EXPECT_EQ(one.cells[i].chi1, three.cells[i].chi1);
    EXPECT_EQ(one.cells[i].rho_max, three.cells[i].rho_max);
  }
  EXPECT_EQ(one.at(2, 1).lambda, 1e-2);
  EXPECT_EQ(one.at(2, 1).K_omega, 5.0);
  EXPECT_TRUE(one.boundary_ordering_holds());
}

TEST(Scan, RejectsUnsortedGrid) {
  EXPECT_THROW(scan({{1e-2, 1e-3}, {1.0}}, reference_params(), Perturbation::reference()),
               std::invalid_argument);
}
