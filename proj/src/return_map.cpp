#include "bykov/return_map.hpp"

#include <cmath>
#include <utility>

namespace bykov {

Point make_cylinder_point(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw ConfigError("cylinder point must be finite");
  }
  if (std::abs(y) > 1.0) {
    throw ConfigError("cylinder point height must satisfy |y| <= 1");
  }
  return {wrap_angle(x), y};
}

Model::Model(const ModelParams& params, Perturbation pert)
    : params_(params),
      constants_(derived_constants(params)),
      pert_(std::move(pert)) {
  validate(pert_);
}

Model Model::with_lambda(double lambda) const {
  ModelParams p = params_;
  p.lambda = lambda;
  return Model(p, pert_);
}

PolarPoint<double> local_map_o1(const Point& p, const ModelParams& params,
                                const RemainderTerms& rem) {
  PolarPoint<double> q = local_map_o1(p, params);
  if (rem.S1) q.r += rem.S1(p.x, p.y, params.lambda);
  if (rem.S2) q.phi = wrap_angle(q.phi + rem.S2(p.x, p.y, params.lambda));
  return q;
}

Point local_map_o2(const PolarPoint<double>& q, const ModelParams& params,
                   const RemainderTerms& rem) {
  Point p = local_map_o2(q, params);
  if (rem.R1) p.x = wrap_angle(p.x + rem.R1(q.r, q.phi, params.lambda));
  if (rem.R2) p.y += rem.R2(q.r, q.phi, params.lambda);
  return p;
}

std::optional<Point> try_return_map(const Point& p, const Model& m) {
  const double Y = p.y + m.lambda() * m.perturbation().phi2(p.x, p.y);
  if (!(Y > 0.0)) return std::nullopt;
  const double X = p.x + m.xi() + m.lambda() * m.perturbation().phi1(p.x, p.y) -
                   m.K_omega() * std::log(Y);
  return Point{wrap_angle(X), std::pow(Y, m.delta())};
}

Point return_map_at_zero(const Point& p, const Model& m) {
  if (!(p.y > 0.0)) {
    throw EscapeError("lambda = 0 return map needs y > 0", p);
  }
  return {wrap_angle(p.x + m.xi() - m.K_omega() * std::log(p.y)),
          std::pow(p.y, m.delta())};
}

Matrix2 eta_jacobian(const Point& p, const DerivedConstants& k) {
  Matrix2 J;
  J << 1.0, -k.K_omega / p.y, 0.0, k.delta * std::pow(p.y, k.delta - 1.0);
  return J;
}

Matrix2 psi21_jacobian(const Point& p, const Model& m) {
  const double lam = m.lambda();
  const auto f1 = m.perturbation().phi1.partials(p.x, p.y);
  const auto f2 = m.perturbation().phi2.partials(p.x, p.y);
  Matrix2 J;
  J << 1.0 + lam * f1.dx, lam * f1.dy, lam * f2.dx, 1.0 + lam * f2.dy;
  return J;
}

double return_map_determinant(const Point& p, const Model& m) {
  const Point q = psi_21(p, m);
  if (!(q.y > 0.0)) throw EscapeError("determinant outside domain", p);
  return m.delta() * std::pow(q.y, m.delta() - 1.0) *
         psi21_jacobian(p, m).determinant();
}

Matrix2 jacobian(MapId map, const Point& p, const Model& m) {
  switch (map) {
    case MapId::Eta:
      if (!(p.y > 0.0)) throw DomainError("eta Jacobian needs y > 0", p);
      return eta_jacobian(p, m.constants());
    case MapId::Psi21:
      return psi21_jacobian(p, m);
    case MapId::Return: {
      const Point q = psi_21(p, m);
      if (!(q.y > 0.0)) throw EscapeError("Jacobian outside domain", p);
      return eta_jacobian(q, m.constants()) * psi21_jacobian(p, m);
    }
    case MapId::Rescaled: {
      const double lam = m.lambda();
      if (!(lam > 0.0)) throw ConfigError("rescaled coordinates need lambda > 0");
      const Point original{p.x, lam * p.y};
      const Matrix2 J = jacobian(MapId::Return, original, m);
      // D(S ∘ 𝓕 ∘ S⁻¹) with S = diag(1, 1/λ).
      Matrix2 R;
      R << J(0, 0), lam * J(0, 1), J(1, 0) / lam, J(1, 1);
      return R;
    }
  }
  throw std::logic_error("unknown map id");
}

Matrix2 finite_difference_jacobian(
    const std::function<Point(const Point&)>& map, const Point& p, double h) {
  Matrix2 J;
  for (int col = 0; col < 2; ++col) {
    Point plus = p;
    Point minus = p;
    (col == 0 ? plus.x : plus.y) += h;
    (col == 0 ? minus.x : minus.y) -= h;
    const Point fp = map(plus);
    const Point fm = map(minus);
    J(0, col) = angle_difference(fp.x, fm.x) / (2.0 * h);
    J(1, col) = (fp.y - fm.y) / (2.0 * h);
  }
  return J;
}

}  // namespace bykov
