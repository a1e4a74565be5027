#pragma once

#include <string>
#include <vector>

#include "bykov/angle.hpp"
#include "bykov/perturbation.hpp"
#include "bykov/return_map.hpp"

namespace bykov {

/// One-parameter family of circle maps h_a with a entering additively.
///
/// Two kinds are supported.  The singular-limit family of the return map,
///   h_a(x) = x + ξ + a − K_ω ln Φ2(x, 0)  (mod 2π),
/// and the synthetic expanding family h_a(x) = m·x + a used as a harness
/// (m = 2 gives the doubling map).  Derivatives never depend on a.
class CircleMapFamily {
 public:
  enum class Kind { LogSection, Expanding };

  /// Family built from the section x ↦ Φ2(x, 0).  Throws ConfigError if the
  /// section is not positive on a fine grid.
  static CircleMapFamily log_section(double xi, double K_omega,
                                     TrigSeries phi2_section);
  /// Singular limit of the return map of `model`.
  static CircleMapFamily from_model(const Model& model);
  /// h_a(x) = degree·x + a.
  static CircleMapFamily expanding(int degree);

  Kind kind() const { return kind_; }
  int degree() const { return kind_ == Kind::Expanding ? degree_ : 1; }
  double xi() const { return xi_; }
  double K_omega() const { return K_omega_; }
  const TrigSeries& section() const { return section_; }

  /// Continuous lift ℝ → ℝ of h_a.
  double lift(double a, double x) const;
  /// h_a(x) in [0, 2π).
  double value(double a, double x) const { return wrap_angle(lift(a, x)); }

  double derivative(double x) const;
  double second_derivative(double x) const;
  double third_derivative(double x) const;

  /// Range of the first derivative over a uniform grid.
  std::pair<double, double> derivative_range(int grid = 1 << 12) const;

  std::string describe() const;

 private:
  CircleMapFamily() = default;

  Kind kind_ = Kind::LogSection;
  int degree_ = 1;
  double xi_ = 0.0;
  double K_omega_ = 0.0;
  TrigSeries section_;
};

/// h_a(x) and its lift, as free functions.
inline double h_eval(const CircleMapFamily& f, double a, double x) {
  return f.value(a, x);
}
inline double h_lift(const CircleMapFamily& f, double a, double x) {
  return f.lift(a, x);
}

/// Critical points c(1) < … < c(q) of h_a in [0, 2π) with h''(c) at each.
/// Independent of a.
struct CriticalSet {
  std::vector<double> points;
  std::vector<double> second_derivatives;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
  /// Circle distance from x to the nearest critical point (+∞ if empty).
  double distance(double x) const;
};

/// h'' magnitude below which a critical point counts as degenerate.
inline constexpr double kMorseTolerance = 1e-8;

/// Thrown when h' has a root with |h''| below kMorseTolerance.
class NonMorseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Roots of h' bracketed by sign changes on a uniform grid of `grid` cells,
/// polished by bisection and Newton to |h'| ≤ 1e-12.
CriticalSet critical_points(const CircleMapFamily& family, int grid = 1 << 14);

}  // namespace bykov
