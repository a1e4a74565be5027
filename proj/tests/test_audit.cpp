#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bykov/audit.hpp"
#include "bykov/io/commands.hpp"

using namespace bykov;

namespace {

CircleMapFamily family_for(double K) {
  return CircleMapFamily::from_model(Model(params_for_twist(K), Perturbation::reference()));
}

const HypothesisVerdict& by_name(const HypothesisAudit& a, const std::string& name) {
  for (const auto& v : a.verdicts) {
    if (v.hypothesis == name) return v;
  }
  throw std::runtime_error("missing verdict " + name);
}

}  // namespace

TEST(H1, LambdaZeroDeterminantClosedForm) {
  const Model m(reference_params(1.0, 0.0), Perturbation::reference());
  const double ymin = 0.05;
  double lo = INFINITY, hi = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double y = ymin + (1.0 - ymin) * i / 200.0;
    const double d = return_map_determinant({0.3 + 0.01 * i, y}, m);
    EXPECT_NEAR(d, 6.0 * std::pow(y, 5.0), 1e-13);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  EXPECT_NEAR(hi / lo, std::pow(1.0 / ymin, 5.0), 1e-6 * std::pow(1.0 / ymin, 5.0));
}

TEST(H1, ReferenceModelFiniteBound) {
  H1Options o;
  o.injectivity_points = 20000;
  const H1Report r = audit_H1(params_for_twist(5.0), Perturbation::reference(), o);
  EXPECT_TRUE(std::isfinite(r.k));
  EXPECT_GT(r.k, 1.0);
  EXPECT_NEAR(r.k * r.k, r.max_ratio, 1e-9 * r.max_ratio);
  EXPECT_EQ(r.collisions, 0);
  EXPECT_EQ(r.verdict.pass, r.max_ratio <= o.ratio_cap);
}

TEST(H23, ToleranceScheduleFollowsTwist) {
  // λ_(a,n) = exp(−(2πn + a)/K) ≤ target ⇔ n ≥ (−K ln target − a)/2π.
  for (double K : {0.3, 5.0, 15.0}) {
    const int n = n_for_lambda(K, 1.0, 1e-5, 3);
    const int oracle = std::max(3, static_cast<int>(std::ceil((-K * std::log(1e-5) - 1.0) / kTwoPi)));
    EXPECT_EQ(n, oracle) << K;
  }
  const H23Report r = audit_H2_H3(params_for_twist(5.0), Perturbation::reference());
  EXPECT_TRUE(r.h2.pass);
  EXPECT_TRUE(r.h3.pass);
  EXPECT_GE(r.n_max, 12);
  EXPECT_EQ(static_cast<int>(r.table.size()), r.n_max - 3 + 1);
}

TEST(H5, RigidRotationRejected) {
  const CircleMapFamily rigid = CircleMapFamily::from_model(
      Model(params_for_twist(5.0), Perturbation::constant(1.5)));
  const H5Report r = audit_H5_proxy(rigid, 1.0);
  EXPECT_FALSE(r.verdict.pass);
  EXPECT_TRUE(r.verdict.proxy);
}

TEST(H5, ReferenceMarginNonzeroAndStepConsistent) {
  const CircleMapFamily fam = family_for(5.0);
  const H4Report h4 = audit_H4(fam);
  ASSERT_TRUE(h4.best.has_value());
  const H5Report r = audit_H5_proxy(fam, h4.best->a);
  EXPECT_TRUE(r.verdict.proxy);
  ASSERT_FALSE(r.verdict.inconclusive);
  EXPECT_TRUE(r.verdict.pass);
  ASSERT_EQ(r.margin_by_step.size(), 3u);
  for (double m : r.margin_by_step) {
    EXPECT_NEAR(m, r.margin_by_step[1], 1e-2 * std::abs(r.margin_by_step[1]));
  }
}

TEST(H6, ClosedFormMatchesFiniteDifferences) {
  for (double K : {1.0, 5.0, 15.0}) {
    const Model m(params_for_twist(K), Perturbation::reference());
    const CriticalSet crit = critical_points(CircleMapFamily::from_model(m));
    const H6Report r = audit_H6(m, crit);
    ASSERT_EQ(r.derivatives.size(), crit.size());
    EXPECT_TRUE(r.verdict.pass);
    for (std::size_t i = 0; i < crit.size(); ++i) {
      const double c = crit.points[i];
      const double hand = -K / (1.1 + std::sin(c));
      EXPECT_NEAR(r.closed_form[i], hand, 1e-14 * std::abs(hand));
      EXPECT_NEAR(r.derivatives[i], hand, 1e-6 * std::abs(hand));
    }
  }
}

TEST(H6, CancellingCouplingFails) {
  // Φ2 = 1.1 + sin x − y makes 1 + ∂Φ2/∂y vanish.
  const Model m(params_for_twist(5.0), Perturbation::y_coupled(-1.0));
  const CriticalSet crit = critical_points(CircleMapFamily::from_model(m));
  ASSERT_FALSE(crit.empty());
  const H6Report r = audit_H6(m, crit);
  EXPECT_FALSE(r.verdict.pass);
  for (double d : r.derivatives) EXPECT_LE(std::abs(d), 1e-6);
}

TEST(H7, ExpansionBoundaryIsExact) {
  const double edge = 3.0 * std::numbers::ln2;
  EXPECT_TRUE(mixing_expansion_holds(edge + 1e-12));
  EXPECT_FALSE(mixing_expansion_holds(edge - 1e-12));
  EXPECT_TRUE(mixing_expansion_holds(2.2));
  EXPECT_NEAR(std::exp(2.2 / 3.0), 2.0820, 1e-4);
  const CircleMapFamily fam = family_for(15.0);
  const H7Report up = audit_H7(fam, 0.0, edge + 1e-12);
  const H7Report dn = audit_H7(fam, 0.0, edge - 1e-12);
  ASSERT_TRUE(up.transitions.primitive());
  EXPECT_EQ(*up.transitions.primitive_power, 1);
  EXPECT_TRUE(up.verdict.pass);
  EXPECT_FALSE(dn.verdict.pass);
}

TEST(H7, SuperstableExpansionBoundaryIsExact) {
  const double edge = std::log(std::log(10.0));
  EXPECT_TRUE(superstable_expansion_holds(edge + 1e-12));
  EXPECT_FALSE(superstable_expansion_holds(edge - 1e-12));
  EXPECT_TRUE(superstable_expansion_holds(0.9));
  MisiurewiczCertificate cert;
  cert.pass = true;
  const CircleMapFamily fam = family_for(15.0);
  cert.critical = critical_points(fam);
  cert.lambda0 = edge + 1e-12;
  EXPECT_TRUE(superstable_conditions(fam, 0.0, cert).expansion.pass);
  cert.lambda0 = edge - 1e-12;
  EXPECT_FALSE(superstable_conditions(fam, 0.0, cert).expansion.pass);
}

TEST(Fraction, WilsonInterval) {
  const auto [lo, hi] = wilson_interval(50, 100);
  EXPECT_NEAR(lo, 0.4038, 1e-4);
  EXPECT_NEAR(hi, 0.5962, 1e-4);
  const double z2 = 1.959963984540054 * 1.959963984540054;
  const auto [l0, h0] = wilson_interval(0, 100);
  EXPECT_NEAR(l0, 0.0, 1e-15);
  EXPECT_NEAR(h0, z2 / (100.0 + z2), 1e-15);
  // Width shrinks like 1/√n.
  const auto [a1, b1] = wilson_interval(250, 1000);
  const auto [a2, b2] = wilson_interval(1000, 4000);
  EXPECT_NEAR((b1 - a1) / (b2 - a2), 2.0, 1e-2);
}

TEST(Fraction, DiffeomorphismRegimeIsZeroAndLargeTwistPositive) {
  const Budget b{1000, 10000, 4096};
  const FractionEstimate small =
      strange_attractor_fraction(params_for_twist(0.3), Perturbation::reference(), 0.05, 100, b);
  EXPECT_EQ(small.fraction, 0.0);
  EXPECT_GE(small.ci_lo, 0.0);
  const FractionEstimate large =
      strange_attractor_fraction(params_for_twist(15.0), Perturbation::reference(), 0.05, 100, b);
  EXPECT_GT(large.ci_lo, 0.1);
  EXPECT_LE(large.fraction, 1.0);
  EXPECT_THROW(strange_attractor_fraction(params_for_twist(15.0), Perturbation::reference(),
                                          0.05, 50, b),
               std::invalid_argument);
}

TEST(Audit, FixedOrderAndOverallRule) {
  const HypothesisAudit a = run_audit(params_for_twist(5.0), Perturbation::reference());
  ASSERT_EQ(a.verdicts.size(), 7u);
  const char* names[] = {"H1", "H2", "H3", "H4", "H5", "H6", "H7"};
  bool all = true;
  for (int i = 0; i < 7; ++i) {
    EXPECT_EQ(a.verdicts[i].hypothesis, names[i]);
    all = all && a.verdicts[i].pass;
  }
  EXPECT_EQ(a.overall, all);
  EXPECT_EQ(a.overall_label, all ? kAuditSupported : kAuditNotSupported);
  EXPECT_TRUE(by_name(a, "H5").proxy);
}

TEST(Audit, DiffeomorphismRegimeLabel) {
  const HypothesisAudit a = run_audit(params_for_twist(0.3), Perturbation::reference());
  const HypothesisVerdict& h4 = by_name(a, "H4");
  EXPECT_FALSE(h4.pass);
  EXPECT_NE(h4.note.find("increase K_omega"), std::string::npos) << h4.note;
  EXPECT_FALSE(a.overall);
}

TEST(Audit, SerialisedAuditIsDeterministic) {
  io::RunConfig cfg = io::parse_config(io::Json::parse(R"({
    "model": {"C1": 2, "E1": 1, "omega1": 1.6666666666666667, "C2": 3, "E2": 1,
              "omega2": 1.6666666666666667, "xi": 0, "lambda": 0.001},
    "perturbation": {"family": "reference"}
  })"));
  io::ensure_section(io::Command::Audit, cfg);
  const auto p = io::Provenance::of(cfg);
  const HypothesisAudit a1 = run_audit(cfg.params, cfg.pert, cfg.audit->options);
  const HypothesisAudit a2 = run_audit(cfg.params, cfg.pert, cfg.audit->options);
  EXPECT_EQ(io::audit_json(a1, cfg.audit->options, cfg, p).dump(),
            io::audit_json(a2, cfg.audit->options, cfg, p).dump());
}
