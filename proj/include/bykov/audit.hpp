#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bykov/misiurewicz.hpp"
#include "bykov/partition.hpp"
#include "bykov/regime.hpp"
#include "bykov/singular_limit.hpp"

namespace bykov {

/// One audited hypothesis with its numeric evidence, in insertion order.
struct HypothesisVerdict {
  std::string hypothesis;
  bool pass = false;
  /// The check is a finite numerical stand-in, never a proof.
  bool proxy = false;
  bool inconclusive = false;
  std::string note;
  std::vector<std::pair<std::string, double>> evidence;

  void add(std::string key, double value) { evidence.emplace_back(std::move(key), value); }
};

// ---------------------------------------------------------------------------
// H1: distortion of the determinant and injectivity.

struct H1Options {
  double lambda_lo = 1e-4;
  double lambda_hi = 1e-2;
  int lambda_samples = 16;
  int point_samples = 1024;
  double ybar_max = 1.0;
  double ratio_cap = 1e3;
  int injectivity_points = 100000;
  double image_tolerance = 1e-12;
  double domain_tolerance = 1e-9;
  std::uint64_t seed = 0;
};

struct H1Report {
  HypothesisVerdict verdict;
  /// sqrt of the largest max/min determinant ratio over the λ samples.
  double k = 0.0;
  double max_ratio = 0.0;
  /// Largest sampled λ up to which every ratio stayed under the cap (0 if none).
  double largest_supported_lambda = 0.0;
  /// Image pairs within image_tolerance whose preimages are farther apart
  /// than domain_tolerance.
  int collisions = 0;
};

/// |det D𝓕| at points (x, ȳ) ∈ S¹ × [0, ybar_max] of the rescaled map,
/// with λ log-spaced over [lambda_lo, lambda_hi].
H1Report audit_H1(const ModelParams& params, const Perturbation& pert,
                  const H1Options& options = {});

// ---------------------------------------------------------------------------
// H2/H3: convergence to the singular limit.

struct H23Options {
  double a = 1.0;
  int n_min = 3;
  int n_max = 12;
  double tolerance = 1e-3;
  /// Minimum number of trailing rows that must decrease.
  int trailing_rows = 3;
  /// Errors at or below this count as converged in the monotonicity walk.
  double error_floor = 1e-12;
  /// Raise n_max until λ_(a,n_max) ≤ 1e-2 · tolerance.
  bool scale_with_twist = true;
  ConvergenceGrid grid;
};

struct H23Report {
  HypothesisVerdict h2;
  HypothesisVerdict h3;
  std::vector<ConvergenceRow> table;
  /// First n from which all three error columns decrease; -1 if none.
  int monotone_from = -1;
  /// Largest n actually tabulated.
  int n_max = 0;
};

/// Smallest n ≥ n_min with λ_(a,n) ≤ target.
int n_for_lambda(double K_omega, double a, double target, int n_min);

H23Report audit_H2_H3(const ModelParams& params, const Perturbation& pert,
                      const H23Options& options = {});

// ---------------------------------------------------------------------------
// H4: Misiurewicz parameters of the singular limit.

struct H4Options {
  double a_lo = 0.0;
  double a_hi = kTwoPi;
  int a_samples = 256;
  MisiurewiczOptions misiurewicz;
};

struct H4Report {
  HypothesisVerdict verdict;
  std::vector<double> passing_a;
  /// Certificate of the passing a with the largest λ0 (ties: smallest a).
  std::optional<MisiurewiczCertificate> best;
};

H4Report audit_H4(const CircleMapFamily& family, const H4Options& options = {});

// ---------------------------------------------------------------------------
// H5: parameter transversality (proxy).

struct H5Options {
  double threshold = 1e-3;
  double step = 1e-4;
  /// Steps of the linearity check on the margin.
  std::vector<double> consistency_steps{1e-5, 1e-4, 1e-3};
  int horizon = 50;
  double delta0 = 0.05;
};

struct H5Report {
  HypothesisVerdict verdict;
  /// Per critical point: d/da h_a(c) − d/da p(a) at a*.
  std::vector<double> margins;
  /// Smallest |margin| at each consistency step.
  std::vector<double> margin_by_step;
};

/// p(a) continues h_{a*}(c) along its orbit: the orbit point at the horizon
/// is held fixed and pulled back through the monotone branch nearest to
/// each reference orbit point.
H5Report audit_H5_proxy(const CircleMapFamily& family, double a_star,
                        const H5Options& options = {});

/// Continuation p(a) used by the H5 proxy; empty when an orbit point lies
/// within δ0/2 of the critical set.
std::optional<double> continued_point(const CircleMapFamily& family, double a_star,
                                      double c, double a, int horizon, double delta0);

// ---------------------------------------------------------------------------
// H6: non-degeneracy at turns.

struct H6Options {
  double step = 1e-6;
  double min_magnitude = 1e-6;
};

struct H6Report {
  HypothesisVerdict verdict;
  /// ∂/∂ȳ of the singular-limit extension at (c, 0), central differences.
  std::vector<double> derivatives;
  /// −K_ω(1 + ∂Φ2/∂y)/Φ2 at (c, 0).
  std::vector<double> closed_form;
};

H6Report audit_H6(const Model& model, const CriticalSet& critical,
                  const H6Options& options = {});

// ---------------------------------------------------------------------------
// H7: mixing.

struct H7Report {
  HypothesisVerdict verdict;
  TransitionMatrix transitions;
  bool expansion = false;
};

H7Report audit_H7(const CircleMapFamily& family, double a_star, double lambda0,
                  int power_cap = kPrimitivePowerCap);

// ---------------------------------------------------------------------------

struct AuditOptions {
  H1Options h1;
  H23Options h23;
  H4Options h4;
  H5Options h5;
  H6Options h6;
  int h7_power_cap = kPrimitivePowerCap;
};

inline constexpr const char* kAuditSupported =
    "hypotheses numerically supported at recorded horizons";
inline constexpr const char* kAuditNotSupported = "hypotheses not supported";

struct HypothesisAudit {
  /// H1, H2, H3, H4, H5, H6, H7 in that order.
  std::vector<HypothesisVerdict> verdicts;
  std::optional<double> a_star;
  std::optional<MisiurewiczCertificate> certificate;
  bool overall = false;
  std::string overall_label;
};

/// Runs every sub-audit for the singular limit of (params, pert).
HypothesisAudit run_audit(const ModelParams& params, const Perturbation& pert,
                          const AuditOptions& options = {});

// ---------------------------------------------------------------------------

struct FractionEstimate {
  double fraction = 0.0;
  /// Wilson score interval at 95 %.
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  int samples = 0;
  int counted = 0;
  /// Samples labelled Escaped, excluded from the fraction.
  int escaped = 0;
};

std::pair<double, double> wilson_interval(int successes, int trials, double z = 1.959963984540054);

/// Fraction of λ drawn uniformly from (0, r] whose cell is a
/// StrangeAttractorCandidate.  Requires samples ≥ 100.
FractionEstimate strange_attractor_fraction(const ModelParams& params,
                                            const Perturbation& pert, double r,
                                            int samples, const Budget& budget = {},
                                            std::uint64_t seed = 0);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::uint64_t bits);

}  // namespace bykov
