#include "bykov/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bykov {

double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------

H1Report audit_H1(const ModelParams& params, const Perturbation& pert,
                  const H1Options& opt) {
  if (!(opt.lambda_lo > 0.0) || !(opt.lambda_hi >= opt.lambda_lo)) {
    throw ConfigError("H1 needs 0 < lambda_lo <= lambda_hi");
  }
  if (opt.lambda_samples < 1 || opt.point_samples < 2) {
    throw ConfigError("H1 needs at least one lambda and two points");
  }
  H1Report rep;
  rep.verdict.hypothesis = "H1";
  std::mt19937_64 rng(opt.seed);
  std::vector<Point> pts(opt.point_samples);
  for (auto& p : pts) {
    p.x = kTwoPi * uniform01(rng());
    p.y = opt.ybar_max * uniform01(rng());
  }

  const Model base(params, pert);
  bool degenerate = false;
  bool all_under_cap = true;
  double min_det_seen = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.lambda_samples; ++i) {
    const double t = opt.lambda_samples == 1 ? 0.0 : double(i) / (opt.lambda_samples - 1);
    const double lam = opt.lambda_lo * std::pow(opt.lambda_hi / opt.lambda_lo, t);
    const Model m = base.with_lambda(lam);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Point& q : pts) {
      const Point orig{q.x, lam * q.y};
      if (!(orig.y + lam * pert.phi2(orig.x, orig.y) > 0.0)) continue;
      const double d = std::abs(return_map_determinant(orig, m));
      if (d <= 1e-300) {
        if (!degenerate) {
          rep.verdict.add("degenerate_x", q.x);
          rep.verdict.add("degenerate_ybar", q.y);
          rep.verdict.add("degenerate_lambda", lam);
        }
        degenerate = true;
        continue;
      }
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    min_det_seen = std::min(min_det_seen, lo);
    const double ratio = hi / lo;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio <= opt.ratio_cap && all_under_cap) {
      rep.largest_supported_lambda = lam;
    } else {
      all_under_cap = false;
    }
  }
  rep.k = std::sqrt(rep.max_ratio);

  if (opt.injectivity_points > 1) {
    const double lam = std::sqrt(opt.lambda_lo * opt.lambda_hi);
    const Model m = base.with_lambda(lam);
    struct Img {
      Point pre, img;
    };
    std::vector<Img> imgs;
    imgs.reserve(opt.injectivity_points);
    for (int i = 0; i < opt.injectivity_points; ++i) {
      const Point pre{kTwoPi * uniform01(rng()), opt.ybar_max * uniform01(rng())};
      try {
        imgs.push_back({pre, rescaled_return_map(pre, m)});
      } catch (const EscapeError&) {
      }
    }
    std::sort(imgs.begin(), imgs.end(),
              [](const Img& l, const Img& r) { return l.img.x < r.img.x; });
    const std::size_t n = imgs.size();
    for (std::size_t i = 0; i < n; ++i) {
      // Forward window on the sorted angle, wrapping once past 2π.
      for (std::size_t s = 1; s < n; ++s) {
        const std::size_t j = (i + s) % n;
        double gap = imgs[j].img.x - imgs[i].img.x;
        if (j < i) gap += kTwoPi;
        if (gap > opt.image_tolerance) break;
        if (std::abs(imgs[j].img.y - imgs[i].img.y) > opt.image_tolerance) continue;
        const double pre_dist = circle_distance(imgs[i].pre.x, imgs[j].pre.x) +
                                std::abs(imgs[i].pre.y - imgs[j].pre.y);
        if (pre_dist > opt.domain_tolerance) ++rep.collisions;
      }
    }
  }

  rep.verdict.add("k", rep.k);
  rep.verdict.add("max_ratio", rep.max_ratio);
  rep.verdict.add("ratio_cap", opt.ratio_cap);
  rep.verdict.add("min_det", min_det_seen);
  rep.verdict.add("largest_supported_lambda", rep.largest_supported_lambda);
  rep.verdict.add("collisions", rep.collisions);
  rep.verdict.pass = !degenerate && rep.max_ratio <= opt.ratio_cap && rep.collisions == 0;
  if (degenerate) {
    rep.verdict.note = "degenerate determinant";
  } else if (rep.max_ratio > opt.ratio_cap) {
    rep.verdict.note = "determinant ratio exceeds cap";
  } else if (rep.collisions > 0) {
    rep.verdict.note = "injectivity spot check found colliding images";
  }
  return rep;
}

// ---------------------------------------------------------------------------

int n_for_lambda(double K_omega, double a, double target, int n_min) {
  if (!(K_omega > 0.0) || !(target > 0.0)) throw ConfigError("n_for_lambda needs K_omega, target > 0");
  const double n = std::ceil((-K_omega * std::log(target) - a) / kTwoPi);
  return std::max(n_min, static_cast<int>(n));
}

H23Report audit_H2_H3(const ModelParams& params, const Perturbation& pert,
                      const H23Options& opt) {
  H23Report rep;
  const Model model(params, pert);
  rep.n_max = opt.n_max;
  if (opt.scale_with_twist) {
    rep.n_max = std::max(rep.n_max, n_for_lambda(derived_constants(params).K_omega, opt.a,
                                                 1e-2 * opt.tolerance, opt.n_min));
  }
  rep.table = singular_limit_convergence(model, opt.a, opt.n_min, rep.n_max, opt.grid);
  const auto& t = rep.table;

  const auto down = [&](double cur, double prev) {
    return cur < prev || cur <= opt.error_floor;
  };
  // Walk back from the end while every column still decreases.
  std::size_t s = t.size() - 1;
  while (s > 0 && down(t[s].value_error, t[s - 1].value_error) &&
         down(t[s].d1_error, t[s - 1].d1_error) && down(t[s].d2_error, t[s - 1].d2_error)) {
    --s;
  }
  const bool eventually = static_cast<int>(t.size() - s) >= opt.trailing_rows;
  if (eventually) rep.monotone_from = t[s].n;
  const ConvergenceRow& last = t.back();

  HypothesisVerdict& h2 = rep.h2;
  HypothesisVerdict& h3 = rep.h3;
  h2.hypothesis = "H2";
  h3.hypothesis = "H3";
  for (HypothesisVerdict* v : {&h2, &h3}) {
    v->add("a", opt.a);
    v->add("n_min", opt.n_min);
    v->add("n_max", rep.n_max);
    v->add("monotone_from", rep.monotone_from);
    v->add("tolerance", opt.tolerance);
  }
  int excluded = 0;
  for (const auto& r : t) excluded += r.excluded;
  h2.add("final_value_error", last.value_error);
  h2.add("excluded_points", excluded);
  h3.add("final_d1_error", last.d1_error);
  h3.add("final_d2_error", last.d2_error);
  h2.pass = eventually && last.value_error < opt.tolerance;
  h3.pass = eventually && last.d1_error < opt.tolerance && last.d2_error < opt.tolerance;
  if (!eventually) h2.note = h3.note = "error table not eventually decreasing";
  return rep;
}

// ---------------------------------------------------------------------------

H4Report audit_H4(const CircleMapFamily& family, const H4Options& opt) {
  if (opt.a_samples < 1) throw ConfigError("H4 needs at least one a sample");
  H4Report rep;
  rep.verdict.hypothesis = "H4";
  rep.verdict.add("a_samples", opt.a_samples);
  rep.verdict.add("delta0", opt.misiurewicz.delta0);
  rep.verdict.add("horizon", opt.misiurewicz.horizon);

  const CriticalSet crit = critical_points(family, opt.misiurewicz.critical_grid);
  if (crit.empty()) {
    const auto [dmin, dmax] = family.derivative_range();
    (void)dmax;
    if (dmin > 1.0) {
      // Uniformly expanding: the conditions hold vacuously.
      auto cert = misiurewicz_check(family, opt.a_lo, crit, opt.misiurewicz);
      rep.verdict.pass = cert.pass;
      rep.verdict.note = "vacuous (no critical points, uniformly expanding)";
      rep.verdict.add("lambda0", cert.lambda0);
      rep.passing_a.push_back(opt.a_lo);
      rep.best = std::move(cert);
    } else {
      rep.verdict.pass = false;
      rep.verdict.note = "diffeomorphism regime, increase K_omega";
    }
    return rep;
  }

  for (int i = 0; i < opt.a_samples; ++i) {
    const double a = opt.a_lo + (opt.a_hi - opt.a_lo) * i / opt.a_samples;
    MisiurewiczCertificate cert = misiurewicz_check(family, a, crit, opt.misiurewicz);
    if (!cert.pass) continue;
    rep.passing_a.push_back(a);
    if (!rep.best || cert.lambda0 > rep.best->lambda0) rep.best = std::move(cert);
  }
  rep.verdict.pass = !rep.passing_a.empty();
  rep.verdict.add("passing", static_cast<double>(rep.passing_a.size()));
  if (rep.best) {
    rep.verdict.add("a_star", rep.best->a);
    rep.verdict.add("lambda0", rep.best->lambda0);
    rep.verdict.add("b0", rep.best->b0);
  } else {
    rep.verdict.note = "no sampled a passed the Misiurewicz check";
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::optional<double> continued_point(const CircleMapFamily& family, double a_star,
                                      double c, double a, int horizon, double delta0) {
  if (horizon < 1) throw std::invalid_argument("continuation needs horizon >= 1");
  const CriticalSet crit = critical_points(family);
  std::vector<double> z(horizon + 1);
  z[0] = family.value(a_star, c);
  for (int k = 0; k < horizon; ++k) z[k + 1] = family.value(a_star, z[k]);
  for (int k = 0; k < horizon; ++k) {
    if (crit.distance(z[k]) < 0.5 * delta0) return std::nullopt;
  }
  double w = z[horizon];
  for (int k = horizon - 1; k >= 0; --k) {
    const double target = family.lift(a_star, z[k]) + angle_difference(w, z[k + 1]);
    double y = z[k];
    for (int it = 0; it < 60; ++it) {
      const double step = (family.lift(a, y) - target) / family.derivative(y);
      y -= step;
      if (std::abs(step) < 1e-15) break;
    }
    w = wrap_angle(y);
  }
  return w;
}

H5Report audit_H5_proxy(const CircleMapFamily& family, double a_star,
                        const H5Options& opt) {
  H5Report rep;
  rep.verdict.hypothesis = "H5";
  rep.verdict.proxy = true;
  rep.verdict.note = "proxy, not a proof";
  rep.verdict.add("a_star", a_star);
  rep.verdict.add("threshold", opt.threshold);
  rep.verdict.add("step", opt.step);
  rep.verdict.add("horizon", opt.horizon);

  const CriticalSet crit = critical_points(family);
  if (crit.empty()) {
    rep.verdict.pass = false;
    rep.verdict.note = "proxy, not a proof; no critical points";
    return rep;
  }

  auto margin_at = [&](double c, double s) -> std::optional<double> {
    const auto pp = continued_point(family, a_star, c, a_star + s, opt.horizon, opt.delta0);
    const auto pm = continued_point(family, a_star, c, a_star - s, opt.horizon, opt.delta0);
    if (!pp || !pm) return std::nullopt;
    const double dp = angle_difference(*pp, *pm) / (2 * s);
    const double dh =
        angle_difference(family.value(a_star + s, c), family.value(a_star - s, c)) / (2 * s);
    return dh - dp;
  };

  for (double c : crit.points) {
    const auto m = margin_at(c, opt.step);
    if (!m) {
      rep.verdict.inconclusive = true;
      rep.verdict.note = "proxy, not a proof; continuation passes within delta0/2 of C";
      rep.verdict.add("ambiguous_critical_point", c);
      return rep;
    }
    rep.margins.push_back(*m);
  }
  for (double s : opt.consistency_steps) {
    double worst = std::numeric_limits<double>::infinity();
    for (double c : crit.points) {
      const auto m = margin_at(c, s);
      if (m) worst = std::min(worst, std::abs(*m));
    }
    rep.margin_by_step.push_back(worst);
  }
  double worst = std::numeric_limits<double>::infinity();
  for (double m : rep.margins) worst = std::min(worst, std::abs(m));
  rep.verdict.add("margin", worst);
  if (!rep.margin_by_step.empty()) {
    const auto [lo, hi] = std::minmax_element(rep.margin_by_step.begin(), rep.margin_by_step.end());
    rep.verdict.add("margin_step_spread", *hi - *lo);
  }
  rep.verdict.pass = worst > opt.threshold;
  return rep;
}

// ---------------------------------------------------------------------------

H6Report audit_H6(const Model& model, const CriticalSet& critical, const H6Options& opt) {
  H6Report rep;
  rep.verdict.hypothesis = "H6";
  rep.verdict.add("step", opt.step);
  rep.verdict.add("min_magnitude", opt.min_magnitude);
  if (critical.empty()) {
    rep.verdict.note = "no critical points";
    return rep;
  }
  const Perturbation& f = model.perturbation();
  bool ok = true;
  double smallest = std::numeric_limits<double>::infinity();
  for (double c : critical.points) {
    const double up = singular_limit_extension(model, 0.0, c, opt.step);
    const double dn = singular_limit_extension(model, 0.0, c, -opt.step);
    const double d = (up - dn) / (2 * opt.step);
    const double phi = f.phi2(c, 0.0);
    rep.derivatives.push_back(d);
    rep.closed_form.push_back(-model.K_omega() * (1.0 + f.phi2.derivative(c, 0.0, 0, 1)) / phi);
    smallest = std::min(smallest, std::abs(d));
    ok = ok && std::abs(d) > opt.min_magnitude;
  }
  rep.verdict.add("smallest_magnitude", smallest);
  rep.verdict.pass = ok;
  if (!ok) rep.verdict.note = "turn derivative vanishes at a critical point";
  return rep;
}

// ---------------------------------------------------------------------------

H7Report audit_H7(const CircleMapFamily& family, double a_star, double lambda0,
                  int power_cap) {
  H7Report rep;
  rep.verdict.hypothesis = "H7";
  rep.verdict.add("lambda0", lambda0);
  rep.verdict.add("exp_lambda0_over_3", std::exp(lambda0 / 3.0));
  rep.expansion = mixing_expansion_holds(lambda0);
  const CriticalSet crit = critical_points(family);
  if (crit.empty()) {
    rep.verdict.note = "no critical points, no partition";
    return rep;
  }
  rep.transitions = transition_matrix(monotonicity_partition(family, a_star, crit), power_cap);
  rep.verdict.add("primitive_power",
                  rep.transitions.primitive_power ? *rep.transitions.primitive_power : -1);
  rep.verdict.add("power_cap", power_cap);
  rep.verdict.pass = rep.expansion && rep.transitions.primitive();
  if (!rep.expansion) {
    rep.verdict.note = "exp(lambda0/3) <= 2";
  } else if (!rep.transitions.primitive()) {
    rep.verdict.note = "transition matrix not primitive within cap";
  }
  return rep;
}

// ---------------------------------------------------------------------------

HypothesisAudit run_audit(const ModelParams& params, const Perturbation& pert,
                          const AuditOptions& opt) {
  HypothesisAudit audit;
  const Model model(params, pert);
  const CircleMapFamily family = CircleMapFamily::from_model(model);
  const CriticalSet crit = critical_points(family, opt.h4.misiurewicz.critical_grid);

  audit.verdicts.push_back(audit_H1(params, pert, opt.h1).verdict);

  const H23Report h23 = audit_H2_H3(params, pert, opt.h23);
  audit.verdicts.push_back(h23.h2);
  audit.verdicts.push_back(h23.h3);

  const H4Report h4 = audit_H4(family, opt.h4);
  audit.verdicts.push_back(h4.verdict);
  if (h4.best && !crit.empty()) {
    audit.a_star = h4.best->a;
    audit.certificate = h4.best;
    H5Options h5o = opt.h5;
    h5o.delta0 = h4.best->delta0;
    audit.verdicts.push_back(audit_H5_proxy(family, *audit.a_star, h5o).verdict);
  } else {
    HypothesisVerdict h5;
    h5.hypothesis = "H5";
    h5.proxy = true;
    h5.note = "proxy, not a proof; no Misiurewicz parameter to test";
    audit.verdicts.push_back(h5);
  }
  audit.verdicts.push_back(audit_H6(model, crit, opt.h6).verdict);
  if (audit.a_star) {
    audit.verdicts.push_back(
        audit_H7(family, *audit.a_star, h4.best->lambda0, opt.h7_power_cap).verdict);
  } else {
    HypothesisVerdict h7;
    h7.hypothesis = "H7";
    h7.note = "no Misiurewicz parameter to test";
    audit.verdicts.push_back(h7);
  }

  audit.overall = std::all_of(audit.verdicts.begin(), audit.verdicts.end(),
                              [](const HypothesisVerdict& v) { return v.pass && !v.inconclusive; });
  audit.overall_label = audit.overall ? kAuditSupported : kAuditNotSupported;
  return audit;
}

// ---------------------------------------------------------------------------

std::pair<double, double> wilson_interval(int successes, int trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = trials;
  const double p = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

FractionEstimate strange_attractor_fraction(const ModelParams& params,
                                            const Perturbation& pert, double r,
                                            int samples, const Budget& budget,
                                            std::uint64_t seed) {
  if (!(r > 0.0)) throw ConfigError("fraction needs r > 0");
  if (samples < 100) throw ConfigError("fraction needs at least 100 samples");
  const double K = derived_constants(params).K_omega;
  std::mt19937_64 rng(seed);
  FractionEstimate est;
  est.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const double lam = r * (1.0 - uniform01(rng()));
    const RegimeCell cell = classify_cell(lam, K, params, pert, budget);
    if (cell.label == RegimeLabel::Escaped) {
      ++est.escaped;
    } else if (cell.label == RegimeLabel::StrangeAttractorCandidate) {
      ++est.counted;
    }
  }
  const int valid = samples - est.escaped;
  est.fraction = valid > 0 ? double(est.counted) / valid : 0.0;
  std::tie(est.ci_lo, est.ci_hi) = wilson_interval(est.counted, valid);
  return est;
}

}  // namespace bykov
