#pragma once

#include <stdexcept>
#include <string>

namespace bykov {

/// Thrown when a configuration record violates a model invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigenvalue data of the two saddle-foci plus the unfolding parameter.
///
/// O1 has eigenvalues -C1 and E1 ± iω1, O2 has eigenvalues C2 and
/// -E2 ± iω2.  `xi` is the global phase offset of the transition back to
/// the first saddle-focus and `lambda` the distance from the organising
/// centre (λ = 0 is the attracting heteroclinic network).
struct ModelParams {
  double C1 = 2.0;
  double E1 = 1.0;
  double omega1 = 1.0;
  double C2 = 3.0;
  double E2 = 1.0;
  double omega2 = 1.0;
  double xi = 0.0;
  double lambda = 0.0;
};

/// Saddle values and twisting number derived from `ModelParams`.
struct DerivedConstants {
  double delta1;   ///< C1 / E1 > 1
  double delta2;   ///< C2 / E2 > 1
  double delta;    ///< δ1 δ2 > 1
  double K_omega;  ///< (E2 ω1 + C1 ω2) / (E1 E2) > 0
};

/// Checks the ordering C > E > 0, ω > 0 for both saddle-foci and λ ≥ 0.
/// Throws ConfigError naming the first violated condition.
void validate(const ModelParams& params);

/// Validates `params` and returns (δ1, δ2, δ, K_ω).
DerivedConstants derived_constants(const ModelParams& params);

/// Reference parameter set: C1=2, E1=1, C2=3, E2=1, ξ=0, ω1=ω2=ω, so that
/// δ = 6 and K_ω = 3ω.
ModelParams reference_params(double omega = 1.0, double lambda = 0.0);

/// Reference set with ω chosen so that the twisting number equals `K_omega`.
ModelParams params_for_twist(double K_omega, double lambda = 0.0);

/// `params` with ω1 and ω2 scaled by a common factor so that the twisting
/// number becomes `K_omega`.  δ is unchanged.
ModelParams with_twist(const ModelParams& params, double K_omega);

}  // namespace bykov
