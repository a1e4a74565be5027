#pragma once

#include <cmath>
#include <numbers>

namespace bykov {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Underlying double of a scalar; overloaded for autodiff types in tests.
inline double scalar_value(double v) { return v; }

template <class Scalar>
double scalar_value(const Scalar& v) {
  return static_cast<double>(v.value());
}

/// Reduces an angle to [0, 2π) with an exact floating-point remainder.
inline double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Generic-scalar reduction: the shift is computed on the value so that
/// derivative information carried by `Scalar` passes through unchanged.
template <class Scalar>
Scalar wrap_angle(const Scalar& x) {
  const double v = scalar_value(x);
  return x + (wrap_angle(v) - v);
}

/// Signed difference a - b reduced to (-π, π].
inline double angle_difference(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

/// Distance between two points of the circle ℝ/2πℤ.
inline double circle_distance(double a, double b) {
  return std::abs(angle_difference(a, b));
}

}  // namespace bykov
