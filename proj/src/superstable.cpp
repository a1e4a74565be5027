#include "bykov/superstable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bykov/singular_limit.hpp"

namespace bykov {

namespace {

double lift_power(const CircleMapFamily& f, double a, double x, int p) {
  for (int k = 0; k < p; ++k) x = f.lift(a, x);
  return x;
}

}  // namespace

double orbit_multiplier(const CircleMapFamily& f, double a, double x, int p) {
  double m = 1.0;
  for (int k = 0; k < p; ++k) {
    m *= f.derivative(x);
    x = f.value(a, x);
  }
  return m;
}

std::vector<SuperstableOrbit> superstable_search(const CircleMapFamily& family,
                                                 const SuperstableOptions& opt) {
  if (opt.period < 1) throw std::invalid_argument("period must be >= 1");
  if (!(opt.a_hi > opt.a_lo)) throw std::invalid_argument("empty parameter window");
  if (opt.a_grid < 2) throw std::invalid_argument("parameter grid needs >= 2 cells");
  if (family.kind() != CircleMapFamily::Kind::LogSection) {
    throw std::invalid_argument("superstable search needs a log-section family");
  }
  const CriticalSet crit = critical_points(family, opt.critical_grid);
  if (crit.empty()) {
    throw std::invalid_argument("superstable search needs a nonempty critical set");
  }

  std::vector<SuperstableOrbit> found;
  for (double c : crit.points) {
    const int cells = opt.a_grid;
    std::vector<double> as(cells + 1), gs(cells + 1);
    for (int i = 0; i <= cells; ++i) {
      as[i] = opt.a_lo + (opt.a_hi - opt.a_lo) * i / cells;
      gs[i] = lift_power(family, as[i], c, opt.period) - c;
    }
    const auto [gmin, gmax] = std::minmax_element(gs.begin(), gs.end());
    const int m_lo = static_cast<int>(std::floor(*gmin / kTwoPi));
    const int m_hi = static_cast<int>(std::ceil(*gmax / kTwoPi));
    for (int m = m_lo; m <= m_hi; ++m) {
      auto g = [&](double a) {
        return lift_power(family, a, c, opt.period) - c - kTwoPi * m;
      };
      for (int i = 0; i < cells; ++i) {
        const double g0 = gs[i] - kTwoPi * m;
        const double g1 = gs[i + 1] - kTwoPi * m;
        // Half-open test so a root on a grid node is reported once.
        if (!((g0 < 0.0 && g1 >= 0.0) || (g0 >= 0.0 && g1 < 0.0))) continue;
        double lo = as[i], hi = as[i + 1], glo = g0;
        double a_star = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
          a_star = 0.5 * (lo + hi);
          const double gm = g(a_star);
          if (std::abs(gm) <= opt.tolerance * 1e-2 || hi - lo < 1e-15) break;
          if ((gm < 0.0) == (glo < 0.0)) {
            lo = a_star;
            glo = gm;
          } else {
            hi = a_star;
          }
        }
        if (std::abs(g(a_star)) > opt.tolerance) continue;
        SuperstableOrbit o;
        o.a_star = a_star;
        o.critical_point = c;
        o.period = opt.period;
        o.winding = m;
        double x = c;
        for (int k = 0; k < opt.period; ++k) {
          o.orbit.push_back(x);
          x = family.value(a_star, x);
        }
        o.residual = circle_distance(x, c);
        o.multiplier = orbit_multiplier(family, a_star, c, opt.period);
        o.prime_period = opt.period;
        for (int q = 1; q < opt.period; ++q) {
          if (opt.period % q == 0 && circle_distance(o.orbit[q], c) <= 1e3 * opt.tolerance) {
            o.prime_period = q;
            break;
          }
        }
        for (int n = 1; n <= opt.pullback_count; ++n) {
          o.pullback.push_back(pullback_lambda(family.K_omega(), a_star, n));
          o.pullback_matched.push_back(lambda_sequences(family.K_omega(), n, a_star).lambda_a_n);
        }
        found.push_back(std::move(o));
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const SuperstableOrbit& l, const SuperstableOrbit& r) {
    if (l.a_star != r.a_star) return l.a_star < r.a_star;
    return l.critical_point < r.critical_point;
  });
  return found;
}

}  // namespace bykov
