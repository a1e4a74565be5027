#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <vector>

#include "bykov/circle_map.hpp"
#include "bykov/misiurewicz.hpp"

namespace bykov {

/// Interval of monotonicity [lo, hi] between consecutive critical points,
/// in lift coordinates (hi may exceed 2π for the wrapping interval), with
/// the lift values of its endpoints.
struct MonotoneBranch {
  double lo = 0.0;
  double hi = 0.0;
  double image_lo = 0.0;
  double image_hi = 0.0;

  /// |lift(hi) − lift(lo)|: the branch covers S¹ when this is ≥ 2π.
  double variation() const { return image_hi - image_lo; }
  bool surjective() const { return variation() >= kTwoPi; }
};

/// J1, …, Jr for r = q critical points.  Throws std::invalid_argument for
/// an empty critical set (diffeomorphism regime, no partition).
std::vector<MonotoneBranch> monotonicity_partition(const CircleMapFamily& family,
                                                   double a,
                                                   const CriticalSet& critical);

/// q_im = 1 iff J_m ⊂ h(J_i), with the smallest N ≤ cap such that Q^N > 0.
struct TransitionMatrix {
  Eigen::MatrixXi q;
  std::optional<int> primitive_power;
  bool primitive() const { return primitive_power.has_value(); }
};

inline constexpr int kPrimitivePowerCap = 64;

TransitionMatrix transition_matrix(const std::vector<MonotoneBranch>& partition,
                                   int cap = kPrimitivePowerCap);

/// Smallest N ≤ cap with all entries of Q^N positive.
std::optional<int> primitive_power(const Eigen::MatrixXi& q,
                                   int cap = kPrimitivePowerCap);

/// exp(λ0/3) > 2, the expansion part of the mixing condition.
inline bool mixing_expansion_holds(double lambda0) {
  return std::exp(lambda0 / 3.0) > 2.0;
}

/// exp(λ0) > ln 10, the expansion requirement for superstable orbits.
inline bool superstable_expansion_holds(double lambda0) {
  return std::exp(lambda0) > std::log(10.0);
}

/// Conditions under which superstable orbits accumulate on a Misiurewicz
/// parameter: the certificate passes, every branch between consecutive
/// critical points covers [0, 2π], and exp(λ0) > ln 10.
struct SuperstableConditions {
  Verdict misiurewicz;
  Verdict full_branches;
  Verdict expansion;
  std::vector<double> branch_variations;
  bool pass() const {
    return misiurewicz.pass && full_branches.pass && expansion.pass;
  }
};

SuperstableConditions superstable_conditions(const CircleMapFamily& family, double a_star,
                                             const MisiurewiczCertificate& certificate);

}  // namespace bykov
