#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "bykov/angle.hpp"
#include "bykov/params.hpp"
#include "bykov/perturbation.hpp"

namespace bykov {

/// Point of a cross-section: angle x (radians mod 2π) and height y.
template <class Scalar>
struct CylinderPoint {
  Scalar x;
  Scalar y;
};

using Point = CylinderPoint<double>;

/// Point of Out(O1)/In(O2) in polar coordinates.
template <class Scalar>
struct PolarPoint {
  Scalar r;
  Scalar phi;
};

/// Evaluation left the domain of a map.  Carries the offending point.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, Point where)
      : std::domain_error(what), where_(where) {}
  const Point& where() const { return where_; }

 private:
  Point where_;
};

/// y + λΦ2(x, y) ≤ 0: the orbit left the return domain 𝒟.
class EscapeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Normalises x into [0, 2π) and rejects |y| > 1.
Point make_cylinder_point(double x, double y);

/// Optional higher-order corrections S1, S2 (near O1) and R1, R2 (near O2)
/// of the local maps.  Unset callbacks contribute zero.
struct RemainderTerms {
  std::function<double(double x, double y, double lambda)> S1, S2;
  std::function<double(double r, double phi, double lambda)> R1, R2;
};

/// Validated model: parameters, their derived constants and the
/// perturbation pair.  Immutable after construction.
class Model {
 public:
  Model(const ModelParams& params, Perturbation pert);

  const ModelParams& params() const { return params_; }
  const DerivedConstants& constants() const { return constants_; }
  const Perturbation& perturbation() const { return pert_; }

  double lambda() const { return params_.lambda; }
  double delta() const { return constants_.delta; }
  double K_omega() const { return constants_.K_omega; }
  double xi() const { return params_.xi; }

  /// Same model at another unfolding parameter.
  Model with_lambda(double lambda) const;

 private:
  ModelParams params_;
  DerivedConstants constants_;
  Perturbation pert_;
};

// ---------------------------------------------------------------------------
// Local maps near the saddle-foci (leading order, remainders zero).

/// In(O1) → Out(O1): (x, y) ↦ (r, φ) = (y^δ1, x − (ω1/E1) ln y mod 2π).
template <class Scalar>
PolarPoint<Scalar> local_map_o1(const CylinderPoint<Scalar>& p,
                                const ModelParams& params) {
  using std::log;
  using std::pow;
  if (!(scalar_value(p.y) > 0.0)) {
    throw DomainError("local map near O1 needs y > 0 (trapped or wrong branch)",
                      {scalar_value(p.x), scalar_value(p.y)});
  }
  const double delta1 = params.C1 / params.E1;
  return {pow(p.y, delta1),
          wrap_angle(Scalar(p.x - (params.omega1 / params.E1) * log(p.y)))};
}

/// In(O2) → Out(O2): (r, φ) ↦ (φ − (ω2/E2) ln r mod 2π, r^δ2).
template <class Scalar>
CylinderPoint<Scalar> local_map_o2(const PolarPoint<Scalar>& q,
                                   const ModelParams& params) {
  using std::log;
  using std::pow;
  if (!(scalar_value(q.r) > 0.0)) {
    throw DomainError("local map near O2 needs r > 0 (hit the stable manifold)",
                      {scalar_value(q.phi), scalar_value(q.r)});
  }
  const double delta2 = params.C2 / params.E2;
  return {wrap_angle(Scalar(q.phi - (params.omega2 / params.E2) * log(q.r))),
          pow(q.r, delta2)};
}

/// Local maps with optional remainder terms added.
PolarPoint<double> local_map_o1(const Point& p, const ModelParams& params,
                                const RemainderTerms& rem);
Point local_map_o2(const PolarPoint<double>& q, const ModelParams& params,
                   const RemainderTerms& rem);

/// Out(O1) → In(O2) is the identity.
template <class Scalar>
PolarPoint<Scalar> psi_12(const PolarPoint<Scalar>& q) {
  return q;
}

/// η: In(O1) → Out(O2), (x, y) ↦ (x − K_ω ln y mod 2π, y^δ).
template <class Scalar>
CylinderPoint<Scalar> eta(const CylinderPoint<Scalar>& p,
                          const DerivedConstants& k) {
  using std::log;
  using std::pow;
  if (!(scalar_value(p.y) > 0.0)) {
    throw DomainError("eta needs y > 0 (entered lower branch / trapped)",
                      {scalar_value(p.x), scalar_value(p.y)});
  }
  return {wrap_angle(Scalar(p.x - k.K_omega * log(p.y))), pow(p.y, k.delta)};
}

/// Ψ2→1: (x, y) ↦ (x + ξ + λΦ1 mod 2π, y + λΦ2).
template <class Scalar>
CylinderPoint<Scalar> psi_21(const CylinderPoint<Scalar>& p, const Model& m) {
  const double lam = m.lambda();
  const Perturbation& f = m.perturbation();
  return {wrap_angle(Scalar(p.x + m.xi() + lam * f.phi1(p.x, p.y))),
          Scalar(p.y + lam * f.phi2(p.x, p.y))};
}

/// First return map 𝓕_λ = η ∘ Ψ2→1 on 𝒟 = {y + λΦ2(x, y) > 0}.
/// Throws EscapeError carrying the input point outside 𝒟.
template <class Scalar>
CylinderPoint<Scalar> return_map(const CylinderPoint<Scalar>& p,
                                 const Model& m) {
  using std::log;
  using std::pow;
  const double lam = m.lambda();
  const Perturbation& f = m.perturbation();
  const Scalar Y = p.y + lam * f.phi2(p.x, p.y);
  if (!(scalar_value(Y) > 0.0)) {
    throw EscapeError("return map domain violated: y + lambda*Phi2 <= 0",
                      {scalar_value(p.x), scalar_value(p.y)});
  }
  const Scalar X =
      p.x + m.xi() + lam * f.phi1(p.x, p.y) - m.K_omega() * log(Y);
  return {wrap_angle(X), pow(Y, m.delta())};
}

/// Non-throwing variant: empty when the point is outside 𝒟.
std::optional<Point> try_return_map(const Point& p, const Model& m);

/// λ = 0 closed form (x + ξ − K_ω ln y mod 2π, y^δ).
Point return_map_at_zero(const Point& p, const Model& m);

/// Return map in the rescaled coordinates (x, ȳ) = (x, y/λ).
/// Requires λ > 0; Φ is evaluated at the original height λȳ.
template <class Scalar>
CylinderPoint<Scalar> rescaled_return_map(const CylinderPoint<Scalar>& p,
                                          const Model& m) {
  using std::log;
  using std::pow;
  const double lam = m.lambda();
  if (!(lam > 0.0)) {
    throw ConfigError("rescaled coordinates need lambda > 0");
  }
  const Perturbation& f = m.perturbation();
  const Scalar y = lam * p.y;
  const Scalar S = p.y + f.phi2(p.x, y);
  if (!(scalar_value(S) > 0.0)) {
    throw EscapeError("rescaled return map domain violated",
                      {scalar_value(p.x), scalar_value(p.y)});
  }
  const Scalar X = p.x + m.xi() + lam * f.phi1(p.x, y) -
                   m.K_omega() * std::log(lam) - m.K_omega() * log(S);
  return {wrap_angle(X), std::pow(lam, m.delta() - 1.0) * pow(S, m.delta())};
}

// ---------------------------------------------------------------------------
// Jacobians.

using Matrix2 = Eigen::Matrix2d;

enum class MapId { Eta, Psi21, Return, Rescaled };

/// Analytic Jacobian of the chosen map at p (Φ derivatives are analytic).
Matrix2 jacobian(MapId map, const Point& p, const Model& m);

/// Dη(X, Y) = [[1, −K_ω/Y], [0, δ Y^(δ−1)]].
Matrix2 eta_jacobian(const Point& p, const DerivedConstants& k);

/// DΨ2→1(x, y) = I + λ DΦ.
Matrix2 psi21_jacobian(const Point& p, const Model& m);

/// det D𝓕 computed through the factorisation δ Y^(δ−1) · det DΨ2→1.
double return_map_determinant(const Point& p, const Model& m);

/// Central differences with step h; the angular output is differenced on
/// the circle so a wrap between the two stencil points does not matter.
Matrix2 finite_difference_jacobian(
    const std::function<Point(const Point&)>& map, const Point& p,
    double h = 1e-6);

}  // namespace bykov
