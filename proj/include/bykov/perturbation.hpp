#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace bykov {

/// One term a·cos(k x) + b·sin(k x).
struct Harmonic {
  int k = 1;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// Real trigonometric polynomial in the angle x.
struct TrigSeries {
  double constant = 0.0;
  std::vector<Harmonic> harmonics;

  template <class Scalar>
  Scalar operator()(const Scalar& x) const {
    using std::cos;
    using std::sin;
    Scalar acc = Scalar(constant) + 0.0 * x;
    for (const auto& h : harmonics) {
      const Scalar kx = double(h.k) * x;
      acc += h.cos_coef * cos(kx) + h.sin_coef * sin(kx);
    }
    return acc;
  }

  /// d^order/dx^order evaluated analytically, order >= 0.
  double derivative(double x, int order) const;

  bool is_constant() const;
};

/// Smooth map on the cylinder strip written as Σ_j y^j P_j(x) with each
/// P_j a trigonometric polynomial; all partial derivatives are analytic.
class CylinderFunction {
 public:
  CylinderFunction() = default;
  explicit CylinderFunction(TrigSeries y_independent);
  explicit CylinderFunction(std::vector<TrigSeries> by_power_of_y);

  template <class Scalar>
  Scalar operator()(const Scalar& x, const Scalar& y) const {
    if (terms_.empty()) return Scalar(0.0) + 0.0 * x;
    Scalar acc = terms_.back()(x);
    for (auto it = terms_.rbegin() + 1; it != terms_.rend(); ++it) {
      acc = acc * y + (*it)(x);
    }
    return acc;
  }

  struct Partials {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dxy = 0.0;
    double dyy = 0.0;
  };

  Partials partials(double x, double y) const;

  /// ∂^i_x ∂^j_y at (x, y).
  double derivative(double x, double y, int order_x, int order_y) const;

  bool depends_on_y() const;
  const std::vector<TrigSeries>& terms() const { return terms_; }

 private:
  std::vector<TrigSeries> terms_;
};

/// The pair (Φ1, Φ2) of the transition from Out(O2) to In(O1), defined on
/// the strip ℝ/2πℤ × [−ε, ε].  Φ2 must stay positive and ln Φ2(·, 0) must be
/// a Morse function.
struct Perturbation {
  CylinderFunction phi1;
  CylinderFunction phi2;
  double epsilon = 0.1;
  std::string family = "custom";

  /// Φ1 = cos x, Φ2 = 1.1 + sin x.
  static Perturbation reference();
  /// Φ1 = 0, Φ2 ≡ c (rigid-rotation singular limit).
  static Perturbation constant(double c);
  /// Φ1 = cos x, Φ2 = offset + amplitude·sin x.
  static Perturbation offset_sine(double offset, double amplitude);
  /// Reference pair with Φ2 = 1.1 + sin x + coupling·y.
  static Perturbation y_coupled(double coupling);
};

/// Outcome of the numerical Morse test for ln Φ2(·, 0).
struct MorseReport {
  int critical_points = 0;
  double min_abs_second_derivative = 0.0;
  bool nondegenerate = true;
};

/// Throws ConfigError when Φ2 ≤ 0 somewhere on a grid of the strip, or
/// when ln Φ2(·, 0) has a degenerate critical point.
void validate(const Perturbation& pert);

/// Minimum and maximum of Φ2 over a grid of the strip.
std::pair<double, double> phi2_range(const Perturbation& pert, int nx = 4096,
                                     int ny = 9);

/// Sign changes of (ln Φ2)'(·, 0) on a uniform grid plus second-derivative
/// magnitude at each bracketed root.
MorseReport morse_report(const Perturbation& pert, int grid = 1 << 14);

}  // namespace bykov
