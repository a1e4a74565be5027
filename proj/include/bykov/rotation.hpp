#pragma once

#include <vector>

#include "bykov/circle_map.hpp"

namespace bykov {

/// Spread of the rotation numbers (lift^n(x̂) − x̂)/(2πn) over seed points.
struct RotationInterval {
  double rho_min = 0.0;
  double rho_max = 0.0;
  /// |ρ_n − ρ| ≤ 1/n for a single orbit of a degree-one lift.
  double error = 0.0;
  /// Width ≤ 2/n: reported as a single rotation number.
  bool degenerate = false;
  int iterations = 0;
  std::vector<double> per_seed;

  double width() const { return rho_max - rho_min; }
};

/// Seeds are spread uniformly over the circle; n_iter ≥ 1000.
RotationInterval rotation_interval(const CircleMapFamily& family, double a,
                                   int n_iter, int n_seeds);

/// Lift displacement (lift^n(x) − x) accumulated with integer wrap counts so
/// that long orbits keep full precision.
double lift_displacement(const CircleMapFamily& family, double a, double x,
                         int n);

}  // namespace bykov
