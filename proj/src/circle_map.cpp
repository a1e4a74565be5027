#include "bykov/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace bykov {

CircleMapFamily CircleMapFamily::log_section(double xi, double K_omega,
                                             TrigSeries phi2_section) {
  if (!(K_omega >= 0.0) || !std::isfinite(K_omega) || !std::isfinite(xi)) {
    throw ConfigError("circle map family needs finite xi and K_omega >= 0");
  }
  for (int i = 0; i < 4096; ++i) {
    if (!(phi2_section(kTwoPi * i / 4096) > 0.0)) {
      throw ConfigError("Phi2(x, 0) must be positive for the circle map family");
    }
  }
  CircleMapFamily f;
  f.kind_ = Kind::LogSection;
  f.xi_ = xi;
  f.K_omega_ = K_omega;
  f.section_ = std::move(phi2_section);
  return f;
}

CircleMapFamily CircleMapFamily::from_model(const Model& model) {
  const auto& terms = model.perturbation().phi2.terms();
  TrigSeries section = terms.empty() ? TrigSeries{} : terms.front();
  return log_section(model.xi(), model.K_omega(), std::move(section));
}

CircleMapFamily CircleMapFamily::expanding(int degree) {
  if (degree < 2) throw ConfigError("expanding family needs degree >= 2");
  CircleMapFamily f;
  f.kind_ = Kind::Expanding;
  f.degree_ = degree;
  return f;
}

double CircleMapFamily::lift(double a, double x) const {
  if (kind_ == Kind::Expanding) return degree_ * x + a;
  return x + xi_ + a - K_omega_ * std::log(section_(x));
}

double CircleMapFamily::derivative(double x) const {
  if (kind_ == Kind::Expanding) return degree_;
  const double p = section_(x);
  return 1.0 - K_omega_ * section_.derivative(x, 1) / p;
}

double CircleMapFamily::second_derivative(double x) const {
  if (kind_ == Kind::Expanding) return 0.0;
  const double p = section_(x);
  const double g = section_.derivative(x, 1) / p;
  return -K_omega_ * (section_.derivative(x, 2) / p - g * g);
}

double CircleMapFamily::third_derivative(double x) const {
  if (kind_ == Kind::Expanding) return 0.0;
  // (ln p)''' = p'''/p − 3 p' p''/p² + 2 (p'/p)³
  const double p = section_(x);
  const double d1 = section_.derivative(x, 1) / p;
  const double d2 = section_.derivative(x, 2) / p;
  const double d3 = section_.derivative(x, 3) / p;
  return -K_omega_ * (d3 - 3.0 * d1 * d2 + 2.0 * d1 * d1 * d1);
}

std::pair<double, double> CircleMapFamily::derivative_range(int grid) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < grid; ++i) {
    const double d = derivative(kTwoPi * i / grid);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

std::string CircleMapFamily::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::Expanding) {
    os << "expanding(degree=" << degree_ << ")";
  } else {
    os << "log_section(xi=" << xi_ << ", K_omega=" << K_omega_ << ")";
  }
  return os.str();
}

double CriticalSet::distance(double x) const {
  double best = std::numeric_limits<double>::infinity();
  for (double c : points) best = std::min(best, circle_distance(x, c));
  return best;
}

CriticalSet critical_points(const CircleMapFamily& family, int grid) {
  CriticalSet out;
  if (family.kind() == CircleMapFamily::Kind::Expanding) return out;
  if (grid < 16) throw ConfigError("critical point grid needs >= 16 cells");
  const double h = kTwoPi / grid;
  auto d1 = [&](double x) { return family.derivative(x); };

  double prev = d1(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double x = i * h;
    const double cur = d1(x);
    if ((prev < 0.0) != (cur < 0.0)) {
      double a = x - h;
      double b = x;
      const bool a_negative = prev < 0.0;
      for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon(); ++it) {
        const double m = 0.5 * (a + b);
        if ((d1(m) < 0.0) == a_negative) a = m; else b = m;
      }
      double c = 0.5 * (a + b);
      // Newton polish, kept inside the final bracket.
      for (int it = 0; it < 8 && std::abs(d1(c)) > 1e-12; ++it) {
        const double step = d1(c) / family.second_derivative(c);
        const double next = c - step;
        if (!(next >= a && next <= b)) break;
        c = next;
      }
      const double curvature = family.second_derivative(c);
      if (std::abs(curvature) < kMorseTolerance) {
        throw NonMorseError("non-Morse configuration: degenerate critical point at x = " +
                            std::to_string(c));
      }
      out.points.push_back(wrap_angle(c));
      out.second_derivatives.push_back(curvature);
    }
    prev = cur;
  }
  // Sort by position; a root bracketed in the last cell can wrap to ~0.
  std::vector<std::size_t> order(out.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return out.points[l] < out.points[r]; });
  CriticalSet sorted;
  for (std::size_t i : order) {
    sorted.points.push_back(out.points[i]);
    sorted.second_derivatives.push_back(out.second_derivatives[i]);
  }
  return sorted;
}

}  // namespace bykov
