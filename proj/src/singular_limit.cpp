#include "bykov/singular_limit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bykov {

LambdaPair lambda_sequences(double K_omega, int n, double a) {
  if (!(K_omega > 0.0)) throw std::invalid_argument("lambda sequences need K_omega > 0");
  if (n < 1) throw std::invalid_argument("lambda sequences need n >= 1");
  const double base_shift = kTwoPi * n;  // k(λ_n)
  return {twist_shift_inverse(K_omega, base_shift),
          twist_shift_inverse(K_omega, base_shift + a)};
}

double pullback_lambda(double K_omega, double a, int n) {
  if (!(K_omega > 0.0)) throw std::invalid_argument("pullback needs K_omega > 0");
  return std::exp((a - kTwoPi * n) / K_omega);
}

double singular_limit_value(const Model& m, double a, double x, double ybar) {
  const double s = ybar + m.perturbation().phi2(x, 0.0);
  if (!(s > 0.0)) throw EscapeError("singular limit domain violated", {x, ybar});
  return wrap_angle(x + m.xi() + a - m.K_omega() * std::log(s));
}

double singular_limit_extension(const Model& m, double a, double x, double ybar) {
  const double s = ybar + m.perturbation().phi2(x, ybar);
  if (!(s > 0.0)) throw EscapeError("singular limit domain violated", {x, ybar});
  return x + m.xi() + a - m.K_omega() * std::log(s);
}

Point singular_limit_difference(const Model& m, double a, double x, double ybar) {
  const double lam = m.lambda();
  if (!(lam > 0.0)) throw ConfigError("singular limit difference needs lambda > 0");
  const Perturbation& f = m.perturbation();
  const double y = lam * ybar;
  const double base = ybar + f.phi2(x, 0.0);
  // Φ2(x, y) − Φ2(x, 0) from the y-polynomial, without cancellation.
  double increment = 0.0;
  const auto& terms = f.phi2.terms();
  for (std::size_t j = terms.size(); j-- > 1;) {
    increment = (increment + terms[j](x)) * y;
  }
  const double full = base + increment;
  if (!(base > 0.0) || !(full > 0.0)) {
    throw EscapeError("singular limit difference outside domain", {x, ybar});
  }
  const double phase = angle_difference(twist_shift(m.K_omega(), lam), a);
  const double first = lam * f.phi1(x, y) + phase -
                       m.K_omega() * std::log1p(increment / base);
  const double second = std::pow(lam, m.delta() - 1.0) * std::pow(full, m.delta());
  return {std::remainder(first, kTwoPi), second};
}

std::vector<ConvergenceRow> singular_limit_convergence(const Model& model, double a,
                                                       int n_min, int n_max,
                                                       const ConvergenceGrid& g) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("bad n range");
  if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("empty convergence grid");
  const auto [phi2_lo, phi2_hi] = phi2_range(model.perturbation());
  (void)phi2_lo;

  std::vector<ConvergenceRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    ConvergenceRow row;
    row.n = n;
    row.lambda = lambda_sequences(model.K_omega(), n, a).lambda_a_n;
    const Model m = model.with_lambda(row.lambda);
    row.second_component_bound = std::pow(row.lambda, m.delta() - 1.0) *
                                 std::pow(g.ybar_max + phi2_hi, m.delta());
    auto D = [&](double x, double yb) { return singular_limit_difference(m, a, x, yb); };
    for (int i = 0; i < g.nx; ++i) {
      const double x = kTwoPi * i / g.nx;
      for (int j = 0; j < g.ny; ++j) {
        const double yb = g.ny == 1 ? 0.0 : g.ybar_max * j / (g.ny - 1);
        try {
          const Point d = D(x, yb);
          row.value_error = std::max({row.value_error, std::abs(d.x), std::abs(d.y)});
          row.second_component = std::max(row.second_component, d.y);

          const double h1 = g.h1;
          const Point dxp = D(x + h1, yb), dxm = D(x - h1, yb);
          const Point dyp = D(x, yb + h1), dym = D(x, yb - h1);
          const double first[] = {(dxp.x - dxm.x) / (2 * h1), (dxp.y - dxm.y) / (2 * h1),
                                  (dyp.x - dym.x) / (2 * h1), (dyp.y - dym.y) / (2 * h1)};
          for (double v : first) row.d1_error = std::max(row.d1_error, std::abs(v));

          const double h2 = g.h2;
          const Point xp = D(x + h2, yb), xm = D(x - h2, yb);
          const Point yp = D(x, yb + h2), ym = D(x, yb - h2);
          const Point pp = D(x + h2, yb + h2), pm = D(x + h2, yb - h2);
          const Point mp = D(x - h2, yb + h2), mm = D(x - h2, yb - h2);
          const double hh = h2 * h2;
          const double second[] = {
              (xp.x - 2 * d.x + xm.x) / hh, (xp.y - 2 * d.y + xm.y) / hh,
              (yp.x - 2 * d.x + ym.x) / hh, (yp.y - 2 * d.y + ym.y) / hh,
              (pp.x - pm.x - mp.x + mm.x) / (4 * hh), (pp.y - pm.y - mp.y + mm.y) / (4 * hh)};
          for (double v : second) row.d2_error = std::max(row.d2_error, std::abs(v));
        } catch (const EscapeError&) {
          ++row.excluded;
        }
      }
    }
    rows.push_back(row);
  }
  return rows;
}

ConvergenceTrend convergence_trend(const std::vector<ConvergenceRow>& rows,
                                   std::size_t skip) {
  ConvergenceTrend t{true, true, true, true};
  for (std::size_t i = skip + 1; i < rows.size(); ++i) {
    t.value_decreasing = t.value_decreasing && rows[i].value_error < rows[i - 1].value_error;
    t.d1_decreasing = t.d1_decreasing && rows[i].d1_error < rows[i - 1].d1_error;
    t.d2_decreasing = t.d2_decreasing && rows[i].d2_error < rows[i - 1].d2_error;
  }
  for (const auto& r : rows) {
    t.second_bounded = t.second_bounded && r.second_component <= r.second_component_bound;
  }
  return t;
}

}  // namespace bykov
