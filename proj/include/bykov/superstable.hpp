#pragma once

#include <vector>

#include "bykov/circle_map.hpp"

namespace bykov {

struct SuperstableOptions {
  int period = 2;
  double a_lo = 0.0;
  double a_hi = kTwoPi;
  /// Uniform cells used to bracket sign changes in a.
  int a_grid = 4096;
  double tolerance = 1e-10;
  /// Number of pulled-back λ values returned per orbit.
  int pullback_count = 8;
  int critical_grid = 1 << 14;
};

/// Parameter a* at which a critical point c is periodic: h_{a*}^p(c) = c.
struct SuperstableOrbit {
  double a_star = 0.0;
  double critical_point = 0.0;
  int period = 0;
  /// Least p' dividing period with h^p'(c) = c.
  int prime_period = 0;
  /// Winding m with lift^p(c) = c + 2πm.
  int winding = 0;
  /// Circle distance |h^p(c) − c|.
  double residual = 0.0;
  /// (h^p)'(c) = Π h'(h^k(c)), which contains the factor h'(c) = 0.
  double multiplier = 0.0;
  std::vector<double> orbit;
  /// pullback_lambda(K_ω, a*, n) for n = 1, …, pullback_count.
  std::vector<double> pullback;
  /// λ_(a*,n) for the same n, where the twist phase is exactly a*.
  std::vector<double> pullback_matched;
};

/// Brackets the roots of g(a) = lift_a^p(c) − c − 2πm over the window and
/// every winding m the window reaches, then bisects to |g| ≤ tolerance.
/// Results are sorted by a*, then by critical point.
std::vector<SuperstableOrbit> superstable_search(const CircleMapFamily& family,
                                                 const SuperstableOptions& options = {});

/// (h_a^p)'(x) by the chain rule.
double orbit_multiplier(const CircleMapFamily& family, double a, double x, int p);

}  // namespace bykov
