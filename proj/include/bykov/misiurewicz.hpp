#pragma once

#include <string>
#include <vector>

#include "bykov/circle_map.hpp"

namespace bykov {

/// Pass/fail of one quoted inequality with its tightest sampled instance.
struct Verdict {
  std::string condition;
  bool pass = false;
  /// Smallest slack observed (negative when violated).
  double margin = 0.0;
  /// Orbit time of the tightest instance, -1 when not applicable.
  int witness_n = -1;
  /// Point (or critical point) of the tightest instance.
  double witness_x = 0.0;
  std::string note;
};

struct MisiurewiczOptions {
  double delta0 = 0.05;
  int horizon = 50;
  /// Seed orbits used to estimate (λ0, b0).  At least 32.
  int seeds = 32;
  /// The expansion conditions are sampled at δ = delta_fraction·δ0.
  double delta_fraction = 0.5;
  /// Points per critical neighbourhood for the curvature check.
  int curvature_samples = 64;
  int critical_grid = 1 << 14;
};

/// Finite-horizon evidence that h_a is a Misiurewicz-type map.  A pass means
/// every sampled orbit met the inequalities up to `horizon`; it is not a
/// proof.
struct MisiurewiczCertificate {
  double a = 0.0;
  double delta0 = 0.0;
  double delta = 0.0;
  double b0 = 0.0;
  double lambda0 = 0.0;
  int horizon = 0;
  int seeds = 0;
  int samples = 0;
  bool vacuous = false;
  bool pass = false;
  CriticalSet critical;
  /// Verdicts for (1a), (1b), (2a), (2b) in that order.
  std::vector<Verdict> verdicts;
};

MisiurewiczCertificate misiurewicz_check(const CircleMapFamily& family, double a,
                                         const MisiurewiczOptions& options = {});

/// Overload reusing an already computed critical set.
MisiurewiczCertificate misiurewicz_check(const CircleMapFamily& family, double a,
                                         const CriticalSet& critical,
                                         const MisiurewiczOptions& options);

struct ColletEckmannOptions {
  double lambda_ce = 0.01;
  double alpha = 0.01;
  int horizon = 50;
  /// Overrides the certificate's b0 when positive.
  double b0_override = 0.0;
};

/// (λ, α) Collet–Eckmann verdicts for each critical point of h_a.
struct CEReport {
  double a = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double delta0 = 0.0;
  double b0 = 0.0;
  int horizon = 0;
  bool vacuous = false;
  bool pass = false;
  /// Per critical point: CE1 then CE2.
  std::vector<Verdict> verdicts;
};

/// Checks CE1/CE2 up to the horizon with δ0 and b0 taken from `certificate`.
/// Throws std::invalid_argument unless lambda_ce < λ0/5 (and λ0 > 0).
CEReport collet_eckmann_check(const CircleMapFamily& family, double a,
                              const MisiurewiczCertificate& certificate,
                              const ColletEckmannOptions& options);

}  // namespace bykov
