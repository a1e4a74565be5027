#pragma once

#include <vector>

#include "bykov/circle_map.hpp"
#include "bykov/return_map.hpp"

namespace bykov {

/// k(λ) = −K_ω ln λ, the angular shift produced by the unfolding parameter.
inline double twist_shift(double K_omega, double lambda) {
  return -K_omega * std::log(lambda);
}

/// k⁻¹(s) = exp(−s/K_ω).
inline double twist_shift_inverse(double K_omega, double shift) {
  return std::exp(-shift / K_omega);
}

/// λ_n with k(λ_n) = 2πn, and λ_(a,n) = k⁻¹(k(λ_n) + a), so that
/// k(λ_(a,n)) ≡ a (mod 2π).
struct LambdaPair {
  double lambda_n;
  double lambda_a_n;
};

LambdaPair lambda_sequences(double K_omega, int n, double a);

/// exp((a − 2πn)/K_ω), the pulled-back parameter sequence of a superstable
/// orbit of h_a.  Note k(exp((a − 2πn)/K_ω)) ≡ −a (mod 2π); the branch
/// with k ≡ +a is lambda_sequences(K_ω, n, a).lambda_a_n.
double pullback_lambda(double K_omega, double a, int n);

/// Singular limit h_a(x, ȳ) = x + ξ + a − K_ω ln(ȳ + Φ2(x, 0)) with the
/// height argument of Φ2 frozen at 0, i.e. the λ → 0 limit of the first
/// component of the rescaled return map.
double singular_limit_value(const Model& model, double a, double x, double ybar);

/// Extension x + ξ + a − K_ω ln(ȳ + Φ2(x, ȳ)) used by the turn
/// non-degeneracy check.
double singular_limit_extension(const Model& model, double a, double x,
                                double ybar);

/// Difference between the rescaled return map at λ and the singular limit
/// (h_a, 0), first component reduced to (−π, π].  Evaluated term by term so
/// that its magnitude, not that of the map, sets the rounding level.
Point singular_limit_difference(const Model& model_at_lambda, double a,
                                double x, double ybar);

struct ConvergenceGrid {
  int nx = 64;
  int ny = 17;
  double ybar_max = 1.0;
  /// Step for first differences.
  double h1 = 1e-6;
  /// Step for second differences.
  double h2 = 1e-4;
};

struct ConvergenceRow {
  int n = 0;
  double lambda = 0.0;
  /// sup |𝓕̄ − (h_a, 0)| over the grid.
  double value_error = 0.0;
  /// sup over first partial differences of the difference map.
  double d1_error = 0.0;
  /// sup over second partial differences of the difference map.
  double d2_error = 0.0;
  /// sup of the second component alone.
  double second_component = 0.0;
  /// λ^(δ−1) (ȳ_max + max Φ2)^δ.
  double second_component_bound = 0.0;
  int excluded = 0;
};

/// Distance to the singular limit along λ_(a,n) for each n in [n_min, n_max].
std::vector<ConvergenceRow> singular_limit_convergence(const Model& model, double a,
                                                       int n_min, int n_max,
                                                       const ConvergenceGrid& grid = {});

/// True when each column of `rows` decreases strictly from index `skip` on.
struct ConvergenceTrend {
  bool value_decreasing = false;
  bool d1_decreasing = false;
  bool d2_decreasing = false;
  bool second_bounded = false;
  bool all() const {
    return value_decreasing && d1_decreasing && d2_decreasing && second_bounded;
  }
};

ConvergenceTrend convergence_trend(const std::vector<ConvergenceRow>& rows,
                                   std::size_t skip = 0);

}  // namespace bykov
