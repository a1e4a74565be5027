// Acceptance run: one [PASS]/[FAIL] line per criterion, [INFO] lines for
// supporting measurements.  Exit status is nonzero when any criterion fails.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "bykov/audit.hpp"
#include "bykov/io/commands.hpp"
#include "bykov/superstable.hpp"

using namespace bykov;

namespace {

// Pinned tolerances and budgets.
constexpr double kCompositionTol = 1e-14;
constexpr double kClosedFormTol = 1e-13;
constexpr double kSequenceTol = 1e-12;
constexpr double kJacobianRelTol = 1e-6;
constexpr double kSuperstableTol = 1e-10;
constexpr double kMultiplierBound = 0.1;
constexpr double kLyapunovHarnessTol = 1e-10;
constexpr double kDeterminantTol = 1e-2;
constexpr double kBoundaryOffset = 1e-12;
constexpr double kRuntime1 = 1.0;
constexpr double kRuntime4 = 10.0;
constexpr double kRuntime8 = 30.0;
constexpr double kRuntime9 = 300.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int n, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %d: %s | %s | %.2f s\n", o.pass ? "PASS" : "FAIL", n, title,
              o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

void info(int n, const std::string& text) {
  std::printf("[INFO] criterion %d: %s\n", n, text.c_str());
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<Point> grid(int n, double ylo, double yhi) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pts.push_back({kTwoPi * (i + 0.5) / n, ylo + (yhi - ylo) * (j + 0.5) / n});
    }
  }
  return pts;
}

Outcome composition() {
  const auto t0 = std::chrono::steady_clock::now();
  const Model m(reference_params(1.0, 2e-3), Perturbation::reference());
  double eta_err = 0.0, ret_err = 0.0;
  for (const Point& q : grid(100, 1e-3, 0.9)) {
    const Point composed = local_map_o2(psi_12(local_map_o1(q, m.params())), m.params());
    const Point direct = eta(q, m.constants());
    eta_err = std::max({eta_err, circle_distance(composed.x, direct.x), std::abs(composed.y - direct.y)});
    const Point r = return_map(q, m);
    const Point viaeta = eta(psi_21(q, m), m.constants());
    ret_err = std::max({ret_err, circle_distance(r.x, viaeta.x), std::abs(r.y - viaeta.y)});
  }
  const double t = seconds_since(t0);
  return {eta_err <= kCompositionTol && ret_err <= kCompositionTol && t < kRuntime1,
          fmt("eta err %.3g, return err %.3g (tol 1e-14, 10^4 points), runtime %.3f s < 1 s",
              eta_err, ret_err, t)};
}

Outcome constants() {
  const DerivedConstants d = derived_constants(reference_params());
  const bool ok = d.delta1 == 2.0 && d.delta2 == 3.0 && d.delta == 6.0 && d.K_omega == 3.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "(delta1, delta2, delta, K_omega) = (%.17g, %.17g, %.17g, %.17g)",
                d.delta1, d.delta2, d.delta, d.K_omega);
  return {ok, buf};
}

Outcome lambda_zero() {
  const Model m(reference_params(1.0, 0.0), Perturbation::reference());
  const double K = m.K_omega(), xi = m.params().xi, delta = m.constants().delta;
  double err = 0.0;
  for (const Point& q : grid(100, 1e-3, 0.999)) {
    const Point r = return_map(q, m);
    err = std::max({err, circle_distance(r.x, wrap_angle(q.x + xi - K * std::log(q.y))),
                    std::abs(r.y - std::pow(q.y, delta))});
  }
  return {err <= kClosedFormTol, fmt("max err %.3g (tol 1e-13, 10^4 points)", err)};
}

Outcome singular_limit() {
  const auto t0 = std::chrono::steady_clock::now();
  const Model m(reference_params(), Perturbation::reference());
  const double delta = m.constants().delta;
  bool monotone = true, bounded = true;
  double worst_ratio = 0.0, worst_alt = 0.0;
  for (double a : {0.0, 1.0, std::numbers::pi}) {
    const auto rows = singular_limit_convergence(m, a, 4, 12);
    const ConvergenceTrend trend = convergence_trend(rows);
    monotone = monotone && trend.value_decreasing && trend.d1_decreasing && trend.d2_decreasing;
    for (const ConvergenceRow& r : rows) {
      const double bound = std::pow(r.lambda, delta - 1) * std::pow(2.1, 6.0);
      worst_ratio = std::max(worst_ratio, r.second_component / bound);
      worst_alt = std::max(worst_alt, r.second_component / r.second_component_bound);
      bounded = bounded && r.second_component <= bound;
    }
  }
  const double t = seconds_since(t0);
  info(4, fmt("sup second component / (lambda^(delta-1) (ybar_max + max Phi2)^delta) = %.6g "
              "(bound with ybar in [0, 1])", worst_alt));
  return {monotone && bounded && t < kRuntime4,
          std::string("value/d1/d2 decreasing n=4..12 for a in {0,1,pi}: ") +
              (monotone ? "yes" : "no") +
              fmt("; max second component / (lambda^(delta-1) 2.1^6) = %.4g (needs <= 1); "
                  "runtime %.2f s < 10 s",
                  worst_ratio, t)};
}

Outcome sequences() {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> ua(0.0, kTwoPi);
  std::uniform_int_distribution<int> un(1, 20);
  const double K = derived_constants(reference_params()).K_omega;
  double err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = ua(rng);
    const int n = un(rng);
    const double lam = lambda_sequences(K, n, a).lambda_a_n;
    const double s = std::remainder(twist_shift(K, lam) - a, kTwoPi);
    err = std::max(err, std::abs(s));
  }
  return {err <= kSequenceTol, fmt("max |k(lambda_(a,n)) - a mod 2pi| = %.3g (tol 1e-12, 100 draws)", err)};
}

Outcome jacobian_factorisation() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(0.0, kTwoPi), uy(0.05, 0.9);
  const Model m(reference_params(1.0, 0.01), Perturbation::reference());
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Point p{ux(rng), uy(rng)};
    const double analytic = return_map_determinant(p, m);
    const double fd = finite_difference_jacobian([&](const Point& q) { return return_map(q, m); },
                                                 p, 1e-6)
                          .determinant();
    worst = std::max(worst, std::abs(analytic - fd) / std::abs(analytic));
  }
  return {worst <= kJacobianRelTol, fmt("max relative deviation %.3g (tol 1e-6, 10^3 points)", worst)};
}

// Sign changes of h' on a uniform grid of 2^16 points.
std::vector<double> brute_force_critical(const CircleMapFamily& f) {
  const int n = 1 << 16;
  std::vector<double> roots;
  double prev = f.derivative(0.0);
  for (int i = 1; i <= n; ++i) {
    const double x = kTwoPi * i / n;
    const double d = f.derivative(x);
    if ((prev < 0.0) != (d < 0.0)) roots.push_back(x - 0.5 * kTwoPi / n);
    prev = d;
  }
  return roots;
}

Outcome critical_set() {
  const auto fam = [](double K) {
    return CircleMapFamily::from_model(Model(params_for_twist(K), Perturbation::reference()));
  };
  const CriticalSet small = critical_points(fam(0.3));
  const auto small_oracle = brute_force_critical(fam(0.3));
  const CircleMapFamily f5 = fam(5.0);
  const CriticalSet big = critical_points(f5);
  const auto oracle = brute_force_critical(f5);
  bool match = big.size() == 2 && oracle.size() == 2;
  double dist = 0.0, curvature = INFINITY;
  if (match) {
    for (std::size_t i = 0; i < 2; ++i) {
      double best = INFINITY;
      for (double r : oracle) best = std::min(best, circle_distance(big.points[i], r));
      dist = std::max(dist, best);
      curvature = std::min(curvature, std::abs(big.second_derivatives[i]));
    }
    match = dist <= kTwoPi / (1 << 16) && curvature > kMorseTolerance;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "K=0.3: %zu points (oracle %zu); K=5: %zu points (oracle %zu), max offset %.3g, "
                "min |h''| %.3g",
                small.size(), small_oracle.size(), big.size(), oracle.size(), dist, curvature);
  return {small.empty() && small_oracle.empty() && match, buf};
}

struct TwoDConfirmation {
  bool found = false;
  double a_star = 0.0;
  double lambda = 0.0;
  double mu1 = 0.0, mu2 = 0.0;
};

// Iterates the return map from near each critical orbit at the given λ and
// looks for an attracting prime period-2 orbit.
TwoDConfirmation confirm_period_two(const std::vector<SuperstableOrbit>& orbits, double K,
                                    const std::function<double(const SuperstableOrbit&)>& lambda_of) {
  TwoDConfirmation best;
  const Model base(params_for_twist(K), Perturbation::reference());
  for (const SuperstableOrbit& o : orbits) {
    if (o.prime_period != 2) continue;
    const double lam = lambda_of(o);
    const Model m = base.with_lambda(lam);
    for (double c : o.orbit) {
      for (double s : {1e-3, 0.1, 0.5, 1.0}) {
        const OrbitRecord rec = iterate(m, {c, lam * s}, 3, 20000);
        if (rec.escaped || rec.points.size() < 3) continue;
        const Point& p0 = rec.points[0];
        const Point& p1 = rec.points[1];
        const Point& p2 = rec.points[2];
        const double back = circle_distance(p2.x, p0.x) + std::abs(p2.y - p0.y);
        const double step = circle_distance(p1.x, p0.x) + std::abs(p1.y - p0.y);
        if (back > 1e-8 || step < 1e-6) continue;
        const Matrix2 J = jacobian(MapId::Return, p1, m) * jacobian(MapId::Return, p0, m);
        const Eigen::Vector2cd ev = Eigen::EigenSolver<Matrix2>(J).eigenvalues();
        const double mu1 = std::abs(ev[0]), mu2 = std::abs(ev[1]);
        if (std::max(mu1, mu2) < kMultiplierBound) return {true, o.a_star, lam, mu1, mu2};
        if (!best.found) best = {false, o.a_star, lam, mu1, mu2};
      }
    }
  }
  return best;
}

Outcome superstable() {
  const auto t0 = std::chrono::steady_clock::now();
  const double K = 5.0;
  const CircleMapFamily fam =
      CircleMapFamily::from_model(Model(params_for_twist(K), Perturbation::reference()));
  SuperstableOptions opt;
  opt.period = 2;
  const auto orbits = superstable_search(fam, opt);
  double worst_res = 0.0, worst_mult = 0.0;
  for (const auto& o : orbits) {
    worst_res = std::max(worst_res, o.residual);
    worst_mult = std::max(worst_mult, std::abs(o.multiplier));
  }
  const bool roots = !orbits.empty() && worst_res <= kSuperstableTol && worst_mult <= kSuperstableTol;
  const TwoDConfirmation literal =
      confirm_period_two(orbits, K, [&](const SuperstableOrbit& o) { return pullback_lambda(K, o.a_star, 1); });
  const TwoDConfirmation matched = confirm_period_two(
      orbits, K, [&](const SuperstableOrbit& o) { return lambda_sequences(K, 1, o.a_star).lambda_a_n; });
  info(8, matched.found
              ? fmt("with lambda_(a*,1) = exp(-(a* + 2pi)/K_omega): a* = %.7f, lambda = %.6g, ", matched.a_star,
                    matched.lambda) +
                    fmt("period-2 sink with |mu| = %.3g, %.3g", matched.mu1, matched.mu2)
              : std::string("no period-2 sink at lambda_(a*,1) either"));
  const double t = seconds_since(t0);
  std::string detail = std::to_string(orbits.size()) +
                       fmt(" roots, max |h^2(c)-c| %.3g, max |(h^2)'(c)| %.3g; ", worst_res, worst_mult);
  detail += literal.found
                ? fmt("lambda_1 = exp((a*-2pi)/K) = %.6g gives period-2 sink |mu| = %.3g, %.3g", literal.lambda,
                      literal.mu1, literal.mu2)
                : std::string("no attracting period-2 orbit with |mu| < 0.1 at lambda_1 = exp((a*-2pi)/K) for any root");
  detail += fmt("; runtime %.2f s < 30 s", t);
  return {roots && literal.found && t < kRuntime8, detail};
}

Outcome regime_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  const Budget budget;  // 10^5 iterates per cell
  ScanGrid column{{1e-3}, {}};
  for (int j = 0; j < 24; ++j) column.k_omegas.push_back(0.1 * std::pow(1.25, j));
  const ScanResult col = scan(column, reference_params(), Perturbation::reference(), budget);
  std::string seq;
  std::size_t ic_prefix = 0;
  while (ic_prefix < col.cells.size() && col.cells[ic_prefix].label == RegimeLabel::InvariantCurve) {
    ++ic_prefix;
  }
  bool ic_after = false;
  std::size_t first_mid = col.cells.size(), first_sac = col.cells.size();
  for (std::size_t j = 0; j < col.cells.size(); ++j) {
    const RegimeLabel l = col.cells[j].label;
    seq += (j ? " " : "");
    seq += l == RegimeLabel::InvariantCurve          ? "IC"
           : l == RegimeLabel::PeriodicSink           ? "PS"
           : l == RegimeLabel::TransientChaos         ? "TC"
           : l == RegimeLabel::StrangeAttractorCandidate ? "SAC"
                                                      : "ESC";
    if (j >= ic_prefix && l == RegimeLabel::InvariantCurve) ic_after = true;
    if ((l == RegimeLabel::PeriodicSink || l == RegimeLabel::TransientChaos) && first_mid == col.cells.size()) {
      first_mid = j;
    }
    if (l == RegimeLabel::StrangeAttractorCandidate && first_sac == col.cells.size()) first_sac = j;
  }
  const bool ordered = ic_prefix > 0 && !ic_after && first_mid < first_sac &&
                       first_sac < col.cells.size() &&
                       col.cells.back().label == RegimeLabel::StrangeAttractorCandidate;
  info(9, "lambda=1e-3, K_omega = 0.1*1.25^j (j=0..23): " + seq);

  const ScanGrid plane{{1e-4, 1e-3, 1e-2, 1e-1}, {0.2, 1.0, 5.0, 15.0}};
  const ScanResult s2 = scan(plane, reference_params(), Perturbation::reference(), budget);
  std::string cols;
  int both = 0;
  for (std::size_t j = 0; j < plane.k_omegas.size(); ++j) {
    const auto t2 = s2.t2_hat[j], t1 = s2.t1_hat[j];
    if (t2 && t1) ++both;
    cols += fmt(" K=%g:", plane.k_omegas[j]) + (t2 ? fmt("%g", *t2) : std::string("-")) + "/" +
            (t1 ? fmt("%g", *t1) : std::string("-"));
  }
  info(9, "2D scan t2_hat/t1_hat per column:" + cols);
  const double t = seconds_since(t0);
  return {ordered && s2.boundary_ordering_holds() && both > 0 && t < kRuntime9,
          std::string("column ") + (ordered ? "IC -> PS/TC -> SAC" : "out of order") +
              "; t2_hat <= t1_hat in all columns: " + (s2.boundary_ordering_holds() ? "yes" : "no") +
              fmt(" (%g columns with both); runtime %.1f s < 300 s", both, t)};
}

Outcome lyapunov_harness() {
  LyapunovAccumulator acc;
  Matrix2 D;
  D << 2.0, 0.0, 0.0, 0.5;
  for (int i = 0; i < 10000; ++i) acc.push(D);
  const LyapunovEstimate e = acc.estimate();
  const double harness = std::max(std::abs(e.chi1 - std::numbers::ln2), std::abs(e.chi2 + std::numbers::ln2));
  const Model m(reference_params(1.0, 1e-3), Perturbation::reference());
  const LyapunovEstimate le = lyapunov(m, {1.0, 5e-4}, 100000);
  const double resid = le.determinant_residual();
  const bool ok = harness <= kLyapunovHarnessTol && !le.inconclusive && !le.chi1_saturated &&
                  !le.chi2_saturated && resid <= kDeterminantTol;
  return {ok, fmt("diag(2,1/2) err %.3g (tol 1e-10); model chi1 %.4g, chi2 %.4g, ", harness, le.chi1,
                  le.chi2) +
                  fmt("|chi1+chi2 - mean ln|det|| = %.3g (tol 1e-2, 10^5 iterates)", resid)};
}

Outcome h7_arithmetic() {
  const CircleMapFamily fam =
      CircleMapFamily::from_model(Model(params_for_twist(15.0), Perturbation::reference()));
  const double e7 = 3.0 * std::numbers::ln2;
  const double e9 = std::log(std::log(10.0));
  const H7Report up = audit_H7(fam, 0.0, e7 + kBoundaryOffset);
  const H7Report dn = audit_H7(fam, 0.0, e7 - kBoundaryOffset);
  MisiurewiczCertificate cert;
  cert.pass = true;
  cert.critical = critical_points(fam);
  cert.lambda0 = e9 + kBoundaryOffset;
  const bool iii_up = superstable_conditions(fam, 0.0, cert).expansion.pass;
  cert.lambda0 = e9 - kBoundaryOffset;
  const bool iii_dn = superstable_conditions(fam, 0.0, cert).expansion.pass;
  const bool h7_ok = up.expansion && !dn.expansion && up.verdict.pass && !dn.verdict.pass &&
                     up.expansion == (std::exp((e7 + kBoundaryOffset) / 3.0) > 2.0) &&
                     dn.expansion == (std::exp((e7 - kBoundaryOffset) / 3.0) > 2.0);
  const bool p92_ok = iii_up && !iii_dn;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "H7 at 3ln2+-1e-12: %s/%s; superstable expansion at ln(ln10)+-1e-12: %s/%s",
                up.verdict.pass ? "accept" : "reject", dn.verdict.pass ? "accept" : "reject",
                iii_up ? "accept" : "reject", iii_dn ? "accept" : "reject");
  return {h7_ok && p92_ok, buf};
}

Outcome determinism() {
  io::RunConfig cfg = io::load_config(BYKOV_SOURCE_DIR "/configs/reference.json");
  io::ensure_section(io::Command::Audit, cfg);
  int compared = 0;
  bool same = true;
  for (io::Command cmd : {io::Command::Scan, io::Command::Audit}) {
    io::RunOptions one, many;
    many.threads = 4;
    const auto a = io::run_command(cmd, cfg, "out", one);
    const auto b = io::run_command(cmd, cfg, "out", one);
    const auto c = io::run_command(cmd, cfg, "out", many);
    same = same && a.outputs.files() == b.outputs.files() && a.outputs.files() == c.outputs.files();
    compared += static_cast<int>(a.outputs.files().size());
  }
  return {same && compared > 0,
          fmt("%g files from scan and audit byte-identical over repeat and 1 vs 4 threads", compared)};
}

}  // namespace

int main() {
  report(1, "composition identity", composition);
  report(2, "reference constants", constants);
  report(3, "lambda = 0 closed form", lambda_zero);
  report(4, "singular-limit convergence", singular_limit);
  report(5, "lambda-sequence identity", sequences);
  report(6, "Jacobian determinant factorisation", jacobian_factorisation);
  report(7, "critical-set oracle", critical_set);
  report(8, "superstable pipeline", superstable);
  report(9, "regime ordering", regime_ordering);
  report(10, "Lyapunov estimator harness", lyapunov_harness);
  report(11, "H7 threshold arithmetic", h7_arithmetic);
  report(12, "determinism", determinism);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
