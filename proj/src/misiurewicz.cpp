#include "bykov/misiurewicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bykov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GrowthSample {
  int n;
  double log_derivative;
};

// Least-squares slope of log|(h^n)'| against n.
double fit_slope(const std::vector<GrowthSample>& s) {
  if (s.size() < 2) return 0.0;
  double mn = 0.0, ml = 0.0;
  for (const auto& g : s) {
    mn += g.n;
    ml += g.log_derivative;
  }
  mn /= s.size();
  ml /= s.size();
  double sxx = 0.0, sxy = 0.0;
  for (const auto& g : s) {
    sxx += (g.n - mn) * (g.n - mn);
    sxy += (g.n - mn) * (g.log_derivative - ml);
  }
  return sxx > 0.0 ? sxy / sxx : ml / std::max(mn, 1.0);
}

Verdict curvature_verdict(const CircleMapFamily& f, const CriticalSet& crit,
                          const MisiurewiczOptions& opt) {
  Verdict v{"1a", true, kInf, -1, 0.0, ""};
  if (crit.empty()) {
    v.note = "vacuous: empty critical set";
    return v;
  }
  for (std::size_t i = 0; i < crit.size(); ++i) {
    const double c = crit.points[i];
    const double sign = crit.second_derivatives[i] > 0.0 ? 1.0 : -1.0;
    for (int k = 0; k < opt.curvature_samples; ++k) {
      const double x = c - opt.delta0 + 2.0 * opt.delta0 * k / (opt.curvature_samples - 1);
      const double curvature = sign * f.second_derivative(x);
      const double margin = curvature - kMorseTolerance;
      if (margin < v.margin) {
        v.margin = margin;
        v.witness_x = wrap_angle(x);
      }
    }
  }
  v.pass = v.margin > 0.0;
  v.note = "h'' bounded away from zero with constant sign on C_delta0";
  return v;
}

Verdict recurrence_verdict(const CircleMapFamily& f, double a,
                           const CriticalSet& crit,
                           const MisiurewiczOptions& opt) {
  Verdict v{"1b", true, kInf, -1, 0.0, ""};
  if (crit.empty()) {
    v.note = "vacuous: empty critical set";
    return v;
  }
  for (double c : crit.points) {
    double x = c;
    for (int n = 1; n <= opt.horizon; ++n) {
      x = f.value(a, x);
      const double margin = crit.distance(x) - opt.delta0;
      if (margin < v.margin) {
        v.margin = margin;
        v.witness_n = n;
        v.witness_x = c;
      }
    }
  }
  v.pass = v.margin >= 0.0;
  v.note = "dist(h^n(c), C) >= delta0 for n <= horizon";
  return v;
}

}  // namespace

MisiurewiczCertificate misiurewicz_check(const CircleMapFamily& family, double a,
                                         const MisiurewiczOptions& options) {
  return misiurewicz_check(family, a, critical_points(family, options.critical_grid),
                           options);
}

MisiurewiczCertificate misiurewicz_check(const CircleMapFamily& family, double a,
                                         const CriticalSet& critical,
                                         const MisiurewiczOptions& opt) {
  if (opt.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(opt.delta0 > 0.0)) throw std::invalid_argument("delta0 must be > 0");
  if (opt.seeds < 32) throw std::invalid_argument("at least 32 seed orbits required");
  if (!(opt.delta_fraction > 0.0 && opt.delta_fraction < 1.0)) {
    throw std::invalid_argument("delta_fraction must lie in (0, 1)");
  }

  MisiurewiczCertificate cert;
  cert.a = a;
  cert.delta0 = opt.delta0;
  cert.delta = opt.delta_fraction * opt.delta0;
  cert.horizon = opt.horizon;
  cert.seeds = opt.seeds;
  cert.critical = critical;
  cert.vacuous = critical.empty();

  // Growth of |(h^n)'| along segments of seed orbits that stay out of C_delta.
  std::vector<GrowthSample> outside;  // condition (2a)
  std::vector<GrowthSample> returns;  // condition (2b): h^n(x) in C_delta0
  for (int s = 0; s < opt.seeds; ++s) {
    double x = kTwoPi * (s + 0.5) / opt.seeds;
    int n = 0;
    double log_d = 0.0;
    for (int t = 0; t < opt.horizon; ++t) {
      if (critical.distance(x) < cert.delta) {
        n = 0;
        log_d = 0.0;
        x = family.value(a, x);
        continue;
      }
      log_d += std::log(std::abs(family.derivative(x)));
      ++n;
      x = family.value(a, x);
      outside.push_back({n, log_d});
      if (critical.distance(x) < cert.delta0) returns.push_back({n, log_d});
    }
  }
  cert.samples = static_cast<int>(outside.size());
  cert.lambda0 = fit_slope(outside);

  // Largest b0 for which both inequalities hold on every sample.
  double log_b0 = kInf;
  for (const auto& g : outside) {
    log_b0 = std::min(log_b0, g.log_derivative - cert.lambda0 * g.n - std::log(cert.delta));
  }
  for (const auto& g : returns) {
    log_b0 = std::min(log_b0, g.log_derivative - cert.lambda0 * g.n);
  }
  cert.b0 = std::isfinite(log_b0) ? std::exp(log_b0) : 0.0;

  cert.verdicts.push_back(curvature_verdict(family, critical, opt));
  cert.verdicts.push_back(recurrence_verdict(family, a, critical, opt));

  const bool expanding = cert.samples > 0 && cert.lambda0 > 0.0 && cert.b0 > 0.0;
  Verdict v2a{"2a", expanding, cert.lambda0, -1, 0.0, ""};
  v2a.note = expanding ? "exponential growth outside C_delta with fitted (lambda0, b0)"
                       : "expansion failure: fitted lambda0 <= 0";
  Verdict v2b{"2b", expanding, cert.lambda0, -1, 0.0, ""};
  v2b.note = std::to_string(returns.size()) + " returns to C_delta0 sampled";
  if (!expanding) v2b.note += "; expansion failure";
  cert.verdicts.push_back(v2a);
  cert.verdicts.push_back(v2b);

  cert.pass = std::all_of(cert.verdicts.begin(), cert.verdicts.end(),
                          [](const Verdict& v) { return v.pass; });
  return cert;
}

CEReport collet_eckmann_check(const CircleMapFamily& family, double a,
                              const MisiurewiczCertificate& cert,
                              const ColletEckmannOptions& opt) {
  CEReport r;
  r.a = a;
  r.lambda = opt.lambda_ce;
  r.alpha = opt.alpha;
  r.delta0 = cert.delta0;
  r.b0 = opt.b0_override > 0.0 ? opt.b0_override : cert.b0;
  r.horizon = opt.horizon;
  const CriticalSet& crit = cert.critical;
  if (crit.empty()) {
    r.vacuous = true;
    r.pass = true;
    return r;
  }
  if (!(cert.lambda0 > 0.0) || !(opt.lambda_ce < cert.lambda0 / 5.0)) {
    throw std::invalid_argument(
        "Collet-Eckmann check needs a certificate with lambda0 > 0 and "
        "lambda_ce < lambda0/5");
  }
  if (!(opt.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(r.b0 > 0.0)) throw std::invalid_argument("b0 must be > 0");

  const double log_scale = std::log(2.0 * r.b0 * r.delta0);
  for (double c : crit.points) {
    Verdict ce1{"CE1", true, kInf, -1, c, ""};
    Verdict ce2{"CE2", true, kInf, -1, c, ""};
    double x = family.value(a, c);  // h(c)
    double log_d = 0.0;             // log |(h^n)'(h(c))|
    for (int n = 1; n <= opt.horizon; ++n) {
      log_d += std::log(std::abs(family.derivative(x)));
      x = family.value(a, x);
      const double margin2 = log_d - log_scale - opt.lambda_ce * n;
      if (margin2 < ce2.margin) {
        ce2.margin = margin2;
        ce2.witness_n = n;
      }
    }
    double y = c;
    for (int n = 1; n <= opt.horizon; ++n) {
      y = family.value(a, y);
      const double bound = std::min(r.delta0 / 2.0, 2.0 * std::exp(-opt.alpha * n));
      const double margin1 = crit.distance(y) - bound;
      if (margin1 < ce1.margin) {
        ce1.margin = margin1;
        ce1.witness_n = n;
      }
    }
    ce1.pass = ce1.margin >= 0.0;
    ce2.pass = ce2.margin >= 0.0;
    ce1.note = "dist(h^n(c), C) >= min(delta0/2, 2 exp(-alpha n))";
    ce2.note = "log|(h^n)'(h(c))| - log(2 b0 delta0) - lambda n >= 0";
    r.verdicts.push_back(ce1);
    r.verdicts.push_back(ce2);
  }
  r.pass = std::all_of(r.verdicts.begin(), r.verdicts.end(),
                       [](const Verdict& v) { return v.pass; });
  return r;
}

}  // namespace bykov
