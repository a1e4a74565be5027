#include "bykov/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bykov {

double lift_displacement(const CircleMapFamily& family, double a, double x,
                         int n) {
  double start = wrap_angle(x);
  double cur = start;
  double turns = 0.0;
  for (int k = 0; k < n; ++k) {
    const double next = family.lift(a, cur);
    const double whole = std::floor(next / kTwoPi);
    turns += whole;
    cur = next - whole * kTwoPi;
    if (cur >= kTwoPi) {  // floor rounding at the seam
      cur -= kTwoPi;
      turns += 1.0;
    } else if (cur < 0.0) {
      cur += kTwoPi;
      turns -= 1.0;
    }
  }
  return (cur - start) + kTwoPi * turns;
}

RotationInterval rotation_interval(const CircleMapFamily& family, double a,
                                   int n_iter, int n_seeds) {
  if (n_iter < 1000) throw std::invalid_argument("rotation interval needs n_iter >= 1000");
  if (n_seeds < 1) throw std::invalid_argument("rotation interval needs at least one seed");
  RotationInterval r;
  r.iterations = n_iter;
  r.per_seed.reserve(n_seeds);
  for (int s = 0; s < n_seeds; ++s) {
    const double x0 = kTwoPi * (s + 0.5) / n_seeds;
    r.per_seed.push_back(lift_displacement(family, a, x0, n_iter) /
                         (kTwoPi * n_iter));
  }
  const auto [lo, hi] = std::minmax_element(r.per_seed.begin(), r.per_seed.end());
  r.rho_min = *lo;
  r.rho_max = *hi;
  r.error = 1.0 / n_iter;
  r.degenerate = r.width() <= 2.0 / n_iter;
  if (r.degenerate) {
    const double mid = 0.5 * (r.rho_min + r.rho_max);
    r.rho_min = r.rho_max = mid;
  }
  return r;
}

}  // namespace bykov
