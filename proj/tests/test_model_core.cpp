#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include <cmath>
#include <random>

#include "bykov/return_map.hpp"

using namespace bykov;

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::Vector2d>;

// Reference return map written out by hand, δ = 6 and Φ = (cos x, 1.1 + sin x).
Point reference_oracle(const Point& p, double K, double lambda) {
  const double Y = p.y + lambda * (1.1 + std::sin(p.x));
  const double X = p.x + lambda * std::cos(p.x) - K * std::log(Y);
  return {wrap_angle(X), std::pow(Y, 6.0)};
}

std::vector<Point> grid_points(int n, double ylo, double yhi) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pts.push_back({kTwoPi * (i + 0.5) / n, ylo + (yhi - ylo) * (j + 0.5) / n});
    }
  }
  return pts;
}

}  // namespace

TEST(Params, ReferenceConstants) {
  const DerivedConstants d = derived_constants(reference_params());
  EXPECT_EQ(d.delta1, 2.0);
  EXPECT_EQ(d.delta2, 3.0);
  EXPECT_EQ(d.delta, 6.0);
  EXPECT_EQ(d.K_omega, 3.0);
}

TEST(Params, TwistingNumberFormula) {
  ModelParams p{2.5, 1.25, 0.7, 4.0, 1.6, 1.3, 0.2, 0.0};
  const DerivedConstants d = derived_constants(p);
  EXPECT_DOUBLE_EQ(d.delta, (2.5 / 1.25) * (4.0 / 1.6));
  EXPECT_DOUBLE_EQ(d.K_omega, (1.6 * 0.7 + 2.5 * 1.3) / (1.25 * 1.6));
}

TEST(Params, RejectsBrokenOrdering) {
  ModelParams p = reference_params();
  p.C1 = 0.5;
  EXPECT_THROW(validate(p), ConfigError);
  p = reference_params();
  p.E2 = 0.0;
  EXPECT_THROW(validate(p), ConfigError);
  p = reference_params();
  p.omega1 = -1.0;
  EXPECT_THROW(validate(p), ConfigError);
  p = reference_params();
  p.lambda = -1e-3;
  EXPECT_THROW(validate(p), ConfigError);
}

TEST(Params, WithTwistKeepsDelta) {
  const ModelParams p = with_twist(reference_params(0.4, 1e-3), 7.5);
  const DerivedConstants d = derived_constants(p);
  EXPECT_NEAR(d.K_omega, 7.5, 1e-14);
  EXPECT_EQ(d.delta, 6.0);
  EXPECT_EQ(p.lambda, 1e-3);
  EXPECT_THROW(with_twist(p, 0.0), ConfigError);
  EXPECT_NEAR(derived_constants(params_for_twist(5.0)).K_omega, 5.0, 1e-14);
}

TEST(Perturbation, Validation) {
  EXPECT_NO_THROW(validate(Perturbation::reference()));
  EXPECT_THROW(validate(Perturbation::constant(-1.0)), ConfigError);
  // 1 + sin x touches zero at x = 3π/2.
  EXPECT_THROW(validate(Perturbation::offset_sine(1.0, 1.0)), ConfigError);
  const auto [lo, hi] = phi2_range(Perturbation::reference());
  EXPECT_NEAR(lo, 0.1, 1e-6);
  EXPECT_NEAR(hi, 2.1, 1e-6);
}

TEST(Perturbation, AnalyticDerivatives) {
  const TrigSeries s{0.3, {{1, 0.5, -0.2}, {3, 0.1, 0.7}}};
  const double x = 0.77, h = 1e-5;
  for (int order = 1; order <= 3; ++order) {
    const double fd = (s.derivative(x + h, order - 1) - s.derivative(x - h, order - 1)) / (2 * h);
    EXPECT_NEAR(s.derivative(x, order), fd, 1e-7) << "order " << order;
  }
  const Perturbation yc = Perturbation::y_coupled(0.4);
  EXPECT_TRUE(yc.phi2.depends_on_y());
  EXPECT_NEAR(yc.phi2.derivative(1.0, 0.05, 0, 1), 0.4, 1e-15);
}

TEST(ReturnMap, CompositionIdentities) {
  const Model m(reference_params(1.0, 2e-3), Perturbation::reference());
  const ModelParams& p = m.params();
  double worst_eta = 0.0, worst_ret = 0.0;
  for (const Point& q : grid_points(100, 1e-3, 0.9)) {
    const auto composed = local_map_o2(psi_12(local_map_o1(q, p)), p);
    const auto direct = eta(q, m.constants());
    worst_eta = std::max({worst_eta, circle_distance(composed.x, direct.x),
                          std::abs(composed.y - direct.y) / std::max(1e-300, direct.y)});
    const Point r = return_map(q, m);
    const Point viaeta = eta(psi_21(q, m), m.constants());
    worst_ret = std::max({worst_ret, circle_distance(r.x, viaeta.x), std::abs(r.y - viaeta.y)});
  }
  EXPECT_LE(worst_eta, 1e-13);
  EXPECT_LE(worst_ret, 1e-14);
}

TEST(ReturnMap, MatchesHandWrittenOracle) {
  const double lam = 0.01;
  const Model m(reference_params(1.0, lam), Perturbation::reference());
  for (const Point& q : grid_points(40, 1e-4, 0.9)) {
    const Point r = return_map(q, m);
    const Point o = reference_oracle(q, 3.0, lam);
    EXPECT_LE(circle_distance(r.x, o.x), 1e-12);
    EXPECT_NEAR(r.y, o.y, 1e-15 + 1e-13 * o.y);
  }
}

TEST(ReturnMap, LambdaZeroClosedForm) {
  const Model m(reference_params(1.0, 0.0), Perturbation::reference());
  for (const Point& q : grid_points(50, 1e-3, 0.9)) {
    const Point r = return_map(q, m);
    EXPECT_LE(circle_distance(r.x, wrap_angle(q.x - 3.0 * std::log(q.y))), 1e-13);
    EXPECT_NEAR(r.y, std::pow(q.y, 6.0), 1e-15);
    const Point z = return_map_at_zero(q, m);
    EXPECT_LE(circle_distance(r.x, z.x), 1e-13);
  }
}

TEST(ReturnMap, EscapeOutsideDomain) {
  const Model m(reference_params(1.0, 0.1), Perturbation::constant(1.0));
  EXPECT_THROW(return_map(Point{0.0, -0.2}, m), EscapeError);
  EXPECT_FALSE(try_return_map({0.0, -0.2}, m).has_value());
  EXPECT_TRUE(try_return_map({0.0, 0.2}, m).has_value());
  const Model m0(reference_params(1.0, 0.0), Perturbation::reference());
  EXPECT_THROW(eta(Point{1.0, 0.0}, m0.constants()), DomainError);
}

TEST(ReturnMap, RescaledConjugacy) {
  const double lam = 3e-3;
  const Model m(reference_params(1.0, lam), Perturbation::y_coupled(0.3));
  for (const Point& q : grid_points(20, 0.0, 1.0)) {
    const Point r = rescaled_return_map(q, m);
    const Point full = return_map(Point{q.x, lam * q.y}, m);
    EXPECT_LE(circle_distance(r.x, full.x), 1e-12);
    EXPECT_NEAR(r.y, full.y / lam, 1e-12 * std::max(1.0, r.y));
  }
  EXPECT_THROW(rescaled_return_map(Point{0.0, 0.5}, m.with_lambda(0.0)), ConfigError);
}

TEST(Jacobian, MatchesAutoDiff) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.0, kTwoPi), uy(0.05, 0.9);
  for (const Perturbation& pert : {Perturbation::reference(), Perturbation::y_coupled(0.5)}) {
    const Model m(reference_params(0.8, 0.02), pert);
    for (int k = 0; k < 200; ++k) {
      const Point p{ux(rng), uy(rng)};
      const CylinderPoint<AD> a{AD(p.x, 2, 0), AD(p.y, 2, 1)};
      const auto check = [&](MapId id, const CylinderPoint<AD>& img) {
        const Matrix2 J = jacobian(id, p, m);
        Matrix2 A;
        A.row(0) = img.x.derivatives().transpose();
        A.row(1) = img.y.derivatives().transpose();
        EXPECT_LE((J - A).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff()));
      };
      check(MapId::Return, return_map(a, m));
      check(MapId::Psi21, psi_21(a, m));
      check(MapId::Eta, eta(a, m.constants()));
      check(MapId::Rescaled, rescaled_return_map(a, m));
    }
  }
}

TEST(Jacobian, DeterminantFactorisation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.0, kTwoPi), uy(0.05, 0.9);
  const Model m(reference_params(1.0, 0.01), Perturbation::y_coupled(0.25));
  for (int k = 0; k < 1000; ++k) {
    const Point p{ux(rng), uy(rng)};
    const double analytic = return_map_determinant(p, m);
    const Matrix2 fd = finite_difference_jacobian(
        [&](const Point& q) { return return_map(q, m); }, p, 1e-6);
    EXPECT_NEAR(analytic, fd.determinant(), 1e-6 * std::abs(analytic));
  }
}
