#include "bykov/perturbation.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "bykov/angle.hpp"
#include "bykov/params.hpp"

namespace bykov {

double TrigSeries::derivative(double x, int order) const {
  double acc = order == 0 ? constant : 0.0;
  for (const auto& h : harmonics) {
    const double k = h.k;
    const double kx = k * x;
    const double c = std::cos(kx);
    const double s = std::sin(kx);
    // d^n/dx^n of (a cos + b sin) cycles with period 4.
    const double scale = std::pow(k, order);
    double term = 0.0;
    switch (order % 4) {
      case 0: term = h.cos_coef * c + h.sin_coef * s; break;
      case 1: term = -h.cos_coef * s + h.sin_coef * c; break;
      case 2: term = -h.cos_coef * c - h.sin_coef * s; break;
      case 3: term = h.cos_coef * s - h.sin_coef * c; break;
    }
    acc += scale * term;
  }
  return acc;
}

bool TrigSeries::is_constant() const {
  return std::all_of(harmonics.begin(), harmonics.end(), [](const Harmonic& h) {
    return h.k == 0 || (h.cos_coef == 0.0 && h.sin_coef == 0.0);
  });
}

CylinderFunction::CylinderFunction(TrigSeries y_independent)
    : terms_{std::move(y_independent)} {}

CylinderFunction::CylinderFunction(std::vector<TrigSeries> by_power_of_y)
    : terms_(std::move(by_power_of_y)) {}

double CylinderFunction::derivative(double x, double y, int order_x,
                                    int order_y) const {
  // d^m/dy^m y^j = j!/(j-m)! y^(j-m)
  double acc = 0.0;
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const int jj = static_cast<int>(j);
    if (jj < order_y) continue;
    double falling = 1.0;
    for (int m = 0; m < order_y; ++m) falling *= double(jj - m);
    acc += falling * std::pow(y, jj - order_y) *
           terms_[j].derivative(x, order_x);
  }
  return acc;
}

CylinderFunction::Partials CylinderFunction::partials(double x,
                                                      double y) const {
  Partials p;
  p.value = derivative(x, y, 0, 0);
  p.dx = derivative(x, y, 1, 0);
  p.dy = derivative(x, y, 0, 1);
  p.dxx = derivative(x, y, 2, 0);
  p.dxy = derivative(x, y, 1, 1);
  p.dyy = derivative(x, y, 0, 2);
  return p;
}

bool CylinderFunction::depends_on_y() const {
  for (std::size_t j = 1; j < terms_.size(); ++j) {
    if (terms_[j].constant != 0.0 || !terms_[j].is_constant()) return true;
  }
  return false;
}

Perturbation Perturbation::reference() { return offset_sine(1.1, 1.0); }

Perturbation Perturbation::constant(double c) {
  Perturbation p;
  p.phi1 = CylinderFunction(TrigSeries{});
  p.phi2 = CylinderFunction(TrigSeries{c, {}});
  p.family = "constant";
  return p;
}

Perturbation Perturbation::offset_sine(double offset, double amplitude) {
  Perturbation p;
  p.phi1 = CylinderFunction(TrigSeries{0.0, {{1, 1.0, 0.0}}});
  p.phi2 = CylinderFunction(TrigSeries{offset, {{1, 0.0, amplitude}}});
  p.family = (offset == 1.1 && amplitude == 1.0) ? "reference" : "offset_sine";
  return p;
}

Perturbation Perturbation::y_coupled(double coupling) {
  Perturbation p = reference();
  p.phi2 = CylinderFunction(std::vector<TrigSeries>{
      TrigSeries{1.1, {{1, 0.0, 1.0}}}, TrigSeries{coupling, {}}});
  p.family = "y_coupled";
  return p;
}

std::pair<double, double> phi2_range(const Perturbation& pert, int nx,
                                     int ny) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < ny; ++j) {
    const double y =
        ny == 1 ? 0.0 : -pert.epsilon + 2.0 * pert.epsilon * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double v = pert.phi2(kTwoPi * i / nx, y);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

MorseReport morse_report(const Perturbation& pert, int grid) {
  // (ln Φ2)' = Φ2x/Φ2, (ln Φ2)'' = Φ2xx/Φ2 - (Φ2x/Φ2)^2 along y = 0.
  auto d1 = [&](double x) {
    return pert.phi2.derivative(x, 0.0, 1, 0) / pert.phi2.derivative(x, 0.0, 0, 0);
  };
  auto d2 = [&](double x) {
    const double v = pert.phi2.derivative(x, 0.0, 0, 0);
    const double g = pert.phi2.derivative(x, 0.0, 1, 0) / v;
    return pert.phi2.derivative(x, 0.0, 2, 0) / v - g * g;
  };
  MorseReport r;
  r.min_abs_second_derivative = std::numeric_limits<double>::infinity();
  const double h = kTwoPi / grid;
  double prev = d1(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double x = i * h;
    const double cur = d1(x);
    if ((prev < 0.0) != (cur < 0.0)) {
      double a = x - h, b = x, fa = prev;
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = d1(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      ++r.critical_points;
      r.min_abs_second_derivative =
          std::min(r.min_abs_second_derivative, std::abs(d2(0.5 * (a + b))));
    }
    prev = cur;
  }
  if (r.critical_points == 0) r.min_abs_second_derivative = 0.0;
  r.nondegenerate = r.critical_points == 0 || r.min_abs_second_derivative > 1e-8;
  return r;
}

void validate(const Perturbation& pert) {
  if (!(pert.epsilon > 0.0) || !std::isfinite(pert.epsilon)) {
    throw ConfigError("perturbation strip half-height epsilon must be > 0");
  }
  const auto [lo, hi] = phi2_range(pert);
  if (!(lo > 0.0) || !std::isfinite(hi)) {
    throw ConfigError("Phi2 must be strictly positive on the strip (min " +
                      std::to_string(lo) + ")");
  }
  if (!morse_report(pert).nondegenerate) {
    throw ConfigError("ln Phi2(., 0) has a degenerate critical point");
  }
}

}  // namespace bykov
