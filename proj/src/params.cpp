#include "bykov/params.hpp"

#include <cmath>

namespace bykov {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid model parameters: " + what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const ModelParams& p) {
  require(finite(p.C1) && finite(p.E1) && finite(p.omega1) && finite(p.C2) &&
              finite(p.E2) && finite(p.omega2) && finite(p.xi) &&
              finite(p.lambda),
          "all entries must be finite");
  require(p.E1 > 0.0, "E1 > 0 required");
  require(p.C1 > p.E1, "C1 > E1 required (delta1 > 1)");
  require(p.omega1 > 0.0, "omega1 > 0 required");
  require(p.E2 > 0.0, "E2 > 0 required");
  require(p.C2 > p.E2, "C2 > E2 required (delta2 > 1)");
  require(p.omega2 > 0.0, "omega2 > 0 required");
  require(p.lambda >= 0.0, "lambda >= 0 required");
}

DerivedConstants derived_constants(const ModelParams& p) {
  validate(p);
  DerivedConstants k{};
  k.delta1 = p.C1 / p.E1;
  k.delta2 = p.C2 / p.E2;
  k.delta = k.delta1 * k.delta2;
  k.K_omega = (p.E2 * p.omega1 + p.C1 * p.omega2) / (p.E1 * p.E2);
  // C/E can round to exactly 1 for C barely above E.
  require(k.delta1 > 1.0 && k.delta2 > 1.0, "saddle values must exceed 1");
  return k;
}

ModelParams reference_params(double omega, double lambda) {
  ModelParams p;
  p.omega1 = omega;
  p.omega2 = omega;
  p.lambda = lambda;
  return p;
}

ModelParams params_for_twist(double K_omega, double lambda) {
  return reference_params(K_omega / 3.0, lambda);
}

ModelParams with_twist(const ModelParams& params, double K_omega) {
  if (!(K_omega > 0.0)) throw ConfigError("twisting number must be positive");
  const double scale = K_omega / derived_constants(params).K_omega;
  ModelParams out = params;
  out.omega1 *= scale;
  out.omega2 *= scale;
  return out;
}

}  // namespace bykov
