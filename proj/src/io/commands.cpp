#include "bykov/io/commands.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "bykov/circle_map.hpp"
#include "bykov/io/svg.hpp"
#include "bykov/partition.hpp"
#include "bykov/rotation.hpp"

namespace bykov::io {

namespace {

constexpr Command kAll[] = {Command::Iterate,     Command::Lyapunov, Command::Scan,
                            Command::Audit,       Command::Misiurewicz,
                            Command::Superstable, Command::Rotation,
                            Command::SingularLimit};

Json constants_json(const ModelParams& params) {
  const DerivedConstants d = derived_constants(params);
  return {{"delta1", d.delta1}, {"delta2", d.delta2}, {"delta", d.delta},
          {"K_omega", d.K_omega}, {"xi", params.xi},  {"lambda", params.lambda}};
}

Json point_json(const Point& p) { return Json::array({p.x, p.y}); }

// Envelope shared by every JSON output.
Json envelope(const std::string& kind, Json constants, Json horizon, Json verdicts,
              const Provenance& prov, Json grid, Json seeds, Json tolerances) {
  Json p = prov.to_json();
  p["grid"] = std::move(grid);
  p["seeds"] = std::move(seeds);
  p["tolerances"] = std::move(tolerances);
  Json doc = Json::object();
  doc["kind"] = kind;
  doc["constants"] = std::move(constants);
  doc["horizon"] = std::move(horizon);
  doc["verdicts"] = std::move(verdicts);
  doc["provenance"] = std::move(p);
  return doc;
}

Json verdict_json(const std::string& condition, bool pass, Json witness) {
  return {{"condition", condition}, {"pass", pass}, {"witness", std::move(witness)}};
}

Json verdict_json(const Verdict& v) {
  Json w = {{"margin", v.margin}, {"n", v.witness_n}, {"x", v.witness_x}};
  if (!v.note.empty()) w["note"] = v.note;
  return verdict_json(v.condition, v.pass, std::move(w));
}

Json verdict_json(const HypothesisVerdict& v) {
  Json w = Json::object();
  for (const auto& [key, value] : v.evidence) w[key] = value;
  w["proxy"] = v.proxy;
  w["inconclusive"] = v.inconclusive;
  if (!v.note.empty()) w["note"] = v.note;
  return verdict_json(v.hypothesis, v.pass, std::move(w));
}

Json certificate_json(const MisiurewiczCertificate& c) {
  Json verdicts = Json::array();
  for (const auto& v : c.verdicts) verdicts.push_back(verdict_json(v));
  return {{"a", c.a},
          {"delta0", c.delta0},
          {"delta", c.delta},
          {"b0", c.b0},
          {"lambda0", c.lambda0},
          {"horizon", c.horizon},
          {"seeds", c.seeds},
          {"samples", c.samples},
          {"vacuous", c.vacuous},
          {"pass", c.pass},
          {"critical_points", c.critical.points},
          {"verdicts", verdicts}};
}

Json misiurewicz_tolerances(const MisiurewiczOptions& o) {
  return {{"delta0", o.delta0},
          {"delta_fraction", o.delta_fraction},
          {"horizon", o.horizon},
          {"critical_grid", o.critical_grid},
          {"morse_tolerance", kMorseTolerance}};
}

std::string fmt(double v) { return format_double(v); }

void note(const RunOptions& o, const std::string& line) {
  if (o.log) *o.log << line << '\n';
}

struct Context {
  const RunConfig& config;
  const Provenance& prov;
  const RunOptions& options;
  CommandResult& result;

  void add_json(const std::string& name, Json doc) {
    doc["config"] = config.resolved();
    result.outputs.add(name, dump(doc));
  }
  void add_svg(const std::string& name, const std::optional<std::string>& svg) {
    if (svg) {
      result.outputs.add(name, *svg);
    } else {
      result.warnings.push_back("no data to plot, " + name + " not written");
    }
  }
};

// ---------------------------------------------------------------------------

void run_iterate(Context& ctx) {
  const IterateSection& s = *ctx.config.iterate;
  const Model model(ctx.config.params, ctx.config.pert);
  const OrbitRecord rec = iterate(model, s.p0, s.n, s.burn_in);
  note(ctx.options, "iterate: " + std::to_string(rec.points.size()) + " points" +
                        (rec.escaped ? " (escaped)" : ""));

  CsvTable csv(ctx.prov, {"iterate", "x", "y"});
  for (std::size_t k = 0; k < rec.points.size(); ++k) {
    csv.row({std::to_string(s.burn_in + static_cast<long>(k)), fmt(rec.points[k].x),
             fmt(rec.points[k].y)});
  }
  ctx.result.outputs.add("orbit.csv", csv.str());

  Json results = {{"points", rec.points.size()}, {"escaped", rec.escaped}};
  if (rec.escaped) {
    results["escape_index"] = rec.escape_index;
    results["escape_point"] = point_json(rec.escape_point);
  }
  if (!rec.points.empty()) {
    const BirkhoffAverage cx = birkhoff_average(rec, [](const Point& p) { return std::cos(p.x); });
    const BirkhoffAverage yy = birkhoff_average(rec, [](const Point& p) { return p.y; });
    results["birkhoff"] = {{"cos_x", {{"value", cx.value}, {"drift", cx.drift}}},
                           {"y", {{"value", yy.value}, {"drift", yy.drift}}},
                           {"partial", cx.partial}};
  }
  if (static_cast<long>(rec.points.size()) >= 10L * s.max_lag) {
    const Autocorrelation ac =
        autocorrelation(rec, [](const Point& p) { return std::cos(p.x); }, s.max_lag);
    results["autocorrelation_cos_x"] = {{"tau", ac.tau},
                                        {"r_squared", ac.r_squared},
                                        {"fit_lags", ac.fit_lags},
                                        {"noise_floor", ac.noise_floor},
                                        {"poor_fit", ac.poor_fit},
                                        {"undefined", ac.undefined},
                                        {"rho", ac.rho}};
  }
  Json doc = envelope("orbit", constants_json(ctx.config.params), s.n, Json::array(), ctx.prov,
                      {{"burn_in", s.burn_in}, {"n", s.n}}, {{"p0", point_json(s.p0)}},
                      Json::object());
  doc["results"] = std::move(results);
  ctx.add_json("iterate.json", std::move(doc));
  if (s.plot) ctx.add_svg("orbit.svg", orbit_svg(rec.points, ctx.prov));
}

void run_lyapunov(Context& ctx) {
  const LyapunovSection& s = *ctx.config.lyapunov;
  const Model model(ctx.config.params, ctx.config.pert);
  const LyapunovEstimate le = lyapunov(model, s.p0, s.n, s.options);
  note(ctx.options, "lyapunov: chi1=" + fmt(le.chi1) + " chi2=" + fmt(le.chi2));
  Json doc = envelope("lyapunov", constants_json(ctx.config.params), s.n, Json::array(),
                      ctx.prov,
                      {{"transient", s.options.transient}, {"cadence", s.options.cadence}},
                      {{"p0", point_json(s.p0)}}, {{"saturated_negative", kSaturatedNegative}});
  doc["results"] = {{"chi1", le.chi1},
                    {"chi2", le.chi2},
                    {"iterates", le.iterates},
                    {"mean_log_det", le.mean_log_det},
                    {"determinant_residual", le.determinant_residual()},
                    {"chi1_saturated", le.chi1_saturated},
                    {"chi2_saturated", le.chi2_saturated},
                    {"inconclusive", le.inconclusive},
                    {"collapsed", le.collapsed}};
  ctx.add_json("lyapunov.json", std::move(doc));
}

void run_scan(Context& ctx) {
  const ScanSection& s = *ctx.config.scan;
  note(ctx.options, "scan: " + std::to_string(s.grid.lambdas.size() * s.grid.k_omegas.size()) +
                        " cells on " + std::to_string(ctx.options.threads) + " thread(s)");
  const ScanResult res =
      scan(s.grid, ctx.config.params, ctx.config.pert, s.budget, ctx.options.threads);
  for (const RegimeCell& c : res.cells) {
    if (!c.failure.empty()) {
      ctx.result.warnings.push_back("cell lambda=" + fmt(c.lambda) + " K_omega=" +
                                    fmt(c.K_omega) + " failed: " + c.failure);
    }
  }
  ctx.result.outputs.add("scan.csv", scan_csv(res, ctx.prov));
  ctx.add_json("scan.json", scan_json(res, s.budget, ctx.config, ctx.prov));
  if (s.plot) ctx.add_svg("scan.svg", scan_svg(res, ctx.prov));
}

void run_audit(Context& ctx) {
  const AuditSection& s = *ctx.config.audit;
  const HypothesisAudit audit = bykov::run_audit(ctx.config.params, ctx.config.pert, s.options);
  note(ctx.options, std::string("audit: ") + audit.overall_label);
  Json doc = audit_json(audit, s.options, ctx.config, ctx.prov);
  if (s.fraction) {
    const FractionSection& f = *s.fraction;
    const FractionEstimate fe = strange_attractor_fraction(
        ctx.config.params, ctx.config.pert, f.r, f.samples, f.budget, ctx.config.seed);
    doc["fraction"] = {{"r", f.r},
                       {"samples", fe.samples},
                       {"counted", fe.counted},
                       {"escaped", fe.escaped},
                       {"fraction", fe.fraction},
                       {"ci95", Json::array({fe.ci_lo, fe.ci_hi})}};
  }
  ctx.add_json("audit.json", std::move(doc));
}

void run_misiurewicz(Context& ctx) {
  const MisiurewiczSection& s = *ctx.config.misiurewicz;
  const Model model(ctx.config.params, ctx.config.pert);
  const CircleMapFamily family = CircleMapFamily::from_model(model);
  const MisiurewiczOptions& mo = s.scan.misiurewicz;

  Json verdicts = Json::array();
  Json results = Json::object();
  std::optional<MisiurewiczCertificate> cert;
  if (s.a) {
    cert = misiurewicz_check(family, *s.a, mo);
  } else {
    const H4Report h4 = audit_H4(family, s.scan);
    verdicts.push_back(verdict_json(h4.verdict));
    results["passing_a"] = h4.passing_a;
    cert = h4.best;
  }
  Json constants = constants_json(ctx.config.params);
  if (cert) {
    for (const auto& v : cert->verdicts) verdicts.push_back(verdict_json(v));
    results["certificate"] = certificate_json(*cert);
    constants["a"] = cert->a;
    constants["lambda0"] = cert->lambda0;
    constants["b0"] = cert->b0;
    if (cert->pass && !cert->vacuous) {
      const SuperstableConditions sc = superstable_conditions(family, cert->a, *cert);
      verdicts.push_back(verdict_json(sc.misiurewicz));
      verdicts.push_back(verdict_json(sc.full_branches));
      verdicts.push_back(verdict_json(sc.expansion));
      results["branch_variations"] = sc.branch_variations;
      verdicts.push_back(verdict_json("exp(lambda0/3) > 2", mixing_expansion_holds(cert->lambda0),
                                      {{"lambda0", cert->lambda0},
                                       {"exp_lambda0_over_3", std::exp(cert->lambda0 / 3.0)}}));
    }
    if (s.collet_eckmann) {
      try {
        const CEReport ce = collet_eckmann_check(family, cert->a, *cert, *s.collet_eckmann);
        for (const auto& v : ce.verdicts) verdicts.push_back(verdict_json(v));
        results["collet_eckmann"] = {{"lambda", ce.lambda}, {"alpha", ce.alpha},
                                     {"b0", ce.b0},         {"horizon", ce.horizon},
                                     {"vacuous", ce.vacuous}, {"pass", ce.pass}};
      } catch (const std::invalid_argument& e) {
        ctx.result.warnings.push_back(std::string("Collet-Eckmann check skipped: ") + e.what());
        results["collet_eckmann"] = {{"skipped", e.what()}};
      }
    }
    note(ctx.options, "misiurewicz: a=" + fmt(cert->a) + (cert->pass ? " pass" : " fail"));
  } else {
    note(ctx.options, "misiurewicz: no passing a in the window");
  }
  Json grid = {{"critical_grid", mo.critical_grid}, {"seeds", mo.seeds}};
  if (!s.a) {
    grid["a_lo"] = s.scan.a_lo;
    grid["a_hi"] = s.scan.a_hi;
    grid["a_samples"] = s.scan.a_samples;
  }
  Json doc = envelope("misiurewicz", constants, mo.horizon, verdicts, ctx.prov, grid,
                      {{"seed_orbits", mo.seeds}}, misiurewicz_tolerances(mo));
  doc["results"] = std::move(results);
  ctx.add_json("misiurewicz.json", std::move(doc));
}

void run_superstable(Context& ctx) {
  const SuperstableOptions& o = ctx.config.superstable->options;
  const Model model(ctx.config.params, ctx.config.pert);
  const CircleMapFamily family = CircleMapFamily::from_model(model);
  const auto orbits = superstable_search(family, o);
  note(ctx.options, "superstable: " + std::to_string(orbits.size()) + " orbit(s)");
  Json verdicts = Json::array();
  Json blocks = Json::array();
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const SuperstableOrbit& s = orbits[i];
    const bool ok = s.residual <= o.tolerance && std::abs(s.multiplier) <= o.tolerance;
    verdicts.push_back(verdict_json("superstable[" + std::to_string(i) + "]", ok,
                                    {{"residual", s.residual}, {"multiplier", s.multiplier}}));
    blocks.push_back({{"a_star", s.a_star},
                      {"critical_point", s.critical_point},
                      {"period", s.period},
                      {"prime_period", s.prime_period},
                      {"winding", s.winding},
                      {"residual", s.residual},
                      {"multiplier", s.multiplier},
                      {"orbit", s.orbit},
                      {"lambda_pullback", s.pullback},
                      {"lambda_matched", s.pullback_matched}});
  }
  Json doc = envelope("superstable", constants_json(ctx.config.params), o.pullback_count,
                      verdicts, ctx.prov,
                      {{"a_lo", o.a_lo},
                       {"a_hi", o.a_hi},
                       {"a_grid", o.a_grid},
                       {"critical_grid", o.critical_grid}},
                      Json::object(), {{"tolerance", o.tolerance}});
  doc["results"] = {{"period", o.period}, {"orbits", blocks}};
  ctx.add_json("superstable.json", std::move(doc));
}

void run_rotation(Context& ctx) {
  const RotationSection& s = *ctx.config.rotation;
  const Model model(ctx.config.params, ctx.config.pert);
  Json results = Json::object();
  if (s.a) {
    const CircleMapFamily family = CircleMapFamily::from_model(model);
    const RotationInterval ri = rotation_interval(family, *s.a, s.n_iter, s.n_seeds);
    results["circle_map"] = {{"a", *s.a},
                             {"rho_min", ri.rho_min},
                             {"rho_max", ri.rho_max},
                             {"error", ri.error},
                             {"degenerate", ri.degenerate},
                             {"iterations", ri.iterations},
                             {"per_seed", ri.per_seed}};
  }
  std::vector<Point> seeds = s.seeds;
  if (seeds.empty()) {
    for (int k = 0; k < s.n_seeds; ++k) seeds.push_back({kTwoPi * (k + 0.5) / s.n_seeds, 0.5});
  }
  if (ctx.config.params.lambda > 0.0) {
    const RotationSet rs = rotation_set_2d(model, seeds, s.n, s.burn_in);
    Json seed_json = Json::array();
    for (const Point& p : seeds) seed_json.push_back(point_json(p));
    results["return_map"] = {{"rho_min", rs.rho_min},
                             {"rho_max", rs.rho_max},
                             {"per_seed", rs.per_seed},
                             {"seeds", seed_json},
                             {"seeds_escaped", rs.seeds_escaped},
                             {"iterations", rs.iterations},
                             {"valid", rs.valid}};
  } else {
    ctx.result.warnings.push_back("rotation set of the return map needs lambda > 0, skipped");
  }
  if (results.empty()) {
    throw ConfigError("rotation needs rotation.a or model.lambda > 0");
  }
  Json doc = envelope("rotation", constants_json(ctx.config.params), s.n, Json::array(), ctx.prov,
                      {{"n_iter", s.n_iter}, {"n_seeds", s.n_seeds}, {"burn_in", s.burn_in}},
                      Json::object(), Json::object());
  doc["results"] = std::move(results);
  ctx.add_json("rotation.json", std::move(doc));
}

void run_singular_limit(Context& ctx) {
  const SingularLimitSection& s = *ctx.config.singular_limit;
  const Model model(ctx.config.params, ctx.config.pert);
  const auto rows = singular_limit_convergence(model, s.a, s.n_min, s.n_max, s.grid);
  CsvTable csv(ctx.prov, {"n", "lambda", "value_error", "d1_error", "d2_error",
                          "second_component", "second_component_bound", "excluded"});
  for (const auto& r : rows) {
    csv.row({std::to_string(r.n), fmt(r.lambda), fmt(r.value_error), fmt(r.d1_error),
             fmt(r.d2_error), fmt(r.second_component), fmt(r.second_component_bound),
             std::to_string(r.excluded)});
  }
  ctx.result.outputs.add("singular_limit.csv", csv.str());

  const ConvergenceTrend trend = convergence_trend(rows);
  Json verdicts = Json::array();
  verdicts.push_back(verdict_json("value_error decreasing", trend.value_decreasing, Json::object()));
  verdicts.push_back(verdict_json("d1_error decreasing", trend.d1_decreasing, Json::object()));
  verdicts.push_back(verdict_json("d2_error decreasing", trend.d2_decreasing, Json::object()));
  verdicts.push_back(verdict_json("second component bounded", trend.second_bounded,
                                  Json::object()));
  Json doc = envelope("singular_limit", constants_json(ctx.config.params), s.n_max, verdicts,
                      ctx.prov,
                      {{"nx", s.grid.nx},
                       {"ny", s.grid.ny},
                       {"ybar_max", s.grid.ybar_max},
                       {"h1", s.grid.h1},
                       {"h2", s.grid.h2}},
                      Json::object(), Json::object());
  doc["results"] = {{"a", s.a}, {"n_min", s.n_min}, {"n_max", s.n_max}, {"rows", rows.size()}};
  ctx.add_json("singular_limit.json", std::move(doc));

  if (s.plot) {
    std::vector<CircleMapPanel> panels;
    for (double K : s.panel_k_omegas) {
      const Model mk(with_twist(ctx.config.params, K), ctx.config.pert);
      panels.push_back(circle_map_panel(CircleMapFamily::from_model(mk), s.panel_a,
                                        s.panel_samples));
    }
    ctx.add_svg("circle_maps.svg", circle_map_svg(panels, ctx.prov));
  }
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Iterate: return "iterate";
    case Command::Lyapunov: return "lyapunov";
    case Command::Scan: return "scan";
    case Command::Audit: return "audit";
    case Command::Misiurewicz: return "misiurewicz";
    case Command::Superstable: return "superstable";
    case Command::Rotation: return "rotation";
    case Command::SingularLimit: return "singular-limit";
  }
  return "";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : kAll) {
    if (name == command_name(c)) return c;
  }
  return std::nullopt;
}

std::vector<Command> all_commands() { return {std::begin(kAll), std::end(kAll)}; }

void ensure_section(Command command, RunConfig& c) {
  switch (command) {
    case Command::Iterate: if (!c.iterate) c.iterate.emplace(); break;
    case Command::Lyapunov: if (!c.lyapunov) c.lyapunov.emplace(); break;
    case Command::Scan:
      if (!c.scan) throw ConfigError("scan needs a scan section with lambdas and k_omegas");
      break;
    case Command::Audit: if (!c.audit) c.audit.emplace(); break;
    case Command::Misiurewicz: if (!c.misiurewicz) c.misiurewicz.emplace(); break;
    case Command::Superstable: if (!c.superstable) c.superstable.emplace(); break;
    case Command::Rotation: if (!c.rotation) c.rotation.emplace(); break;
    case Command::SingularLimit: if (!c.singular_limit) c.singular_limit.emplace(); break;
  }
  apply_seed(c, c.seed);
}

CommandResult run_command(Command command, const RunConfig& config,
                          const std::filesystem::path& output_dir, const RunOptions& options) {
  RunConfig resolved = config;
  ensure_section(command, resolved);
  const Provenance prov = Provenance::of(resolved);
  CommandResult result{OutputSet(output_dir), {}};
  Context ctx{resolved, prov, options, result};
  switch (command) {
    case Command::Iterate: run_iterate(ctx); break;
    case Command::Lyapunov: run_lyapunov(ctx); break;
    case Command::Scan: run_scan(ctx); break;
    case Command::Audit: run_audit(ctx); break;
    case Command::Misiurewicz: run_misiurewicz(ctx); break;
    case Command::Superstable: run_superstable(ctx); break;
    case Command::Rotation: run_rotation(ctx); break;
    case Command::SingularLimit: run_singular_limit(ctx); break;
  }
  return result;
}

// ---------------------------------------------------------------------------

Json audit_json(const HypothesisAudit& audit, const AuditOptions& o, const RunConfig& config,
                const Provenance& prov) {
  Json constants = constants_json(config.params);
  if (audit.a_star) constants["a_star"] = *audit.a_star;
  if (audit.certificate) {
    constants["lambda0"] = audit.certificate->lambda0;
    constants["b0"] = audit.certificate->b0;
  }
  Json verdicts = Json::array();
  for (const auto& v : audit.verdicts) verdicts.push_back(verdict_json(v));
  const Json grid = {{"h1_lambda", Json::array({o.h1.lambda_lo, o.h1.lambda_hi})},
                     {"h1_lambda_samples", o.h1.lambda_samples},
                     {"h1_point_samples", o.h1.point_samples},
                     {"h1_ybar_max", o.h1.ybar_max},
                     {"h23_n", Json::array({o.h23.n_min, o.h23.n_max})},
                     {"h23_nx", o.h23.grid.nx},
                     {"h23_ny", o.h23.grid.ny},
                     {"h4_a", Json::array({o.h4.a_lo, o.h4.a_hi})},
                     {"h4_a_samples", o.h4.a_samples},
                     {"critical_grid", o.h4.misiurewicz.critical_grid}};
  const Json seeds = {{"h1_injectivity", o.h1.seed},
                      {"misiurewicz_seed_orbits", o.h4.misiurewicz.seeds}};
  const Json tolerances = {{"h1_image", o.h1.image_tolerance},
                           {"h1_domain", o.h1.domain_tolerance},
                           {"h23_error_floor", o.h23.error_floor},
                           {"h5_step", o.h5.step},
                           {"h5_consistency_steps", o.h5.consistency_steps},
                           {"h6_step", o.h6.step},
                           {"morse", kMorseTolerance}};
  Json doc = envelope("hypothesis_audit", constants, o.h4.misiurewicz.horizon, verdicts, prov,
                      grid, seeds, tolerances);
  doc["overall"] = {{"pass", audit.overall}, {"label", audit.overall_label}};
  doc["thresholds"] = {{"h1_ratio_cap", o.h1.ratio_cap},
                       {"h23_tolerance", o.h23.tolerance},
                       {"h23_trailing_rows", o.h23.trailing_rows},
                       {"h4_delta0", o.h4.misiurewicz.delta0},
                       {"h5_margin", o.h5.threshold},
                       {"h5_horizon", o.h5.horizon},
                       {"h6_min_magnitude", o.h6.min_magnitude},
                       {"h7_expansion", "exp(lambda0/3) > 2"},
                       {"h7_power_cap", o.h7_power_cap}};
  if (audit.certificate) doc["certificate"] = certificate_json(*audit.certificate);
  return doc;
}

std::string scan_csv(const ScanResult& scan, const Provenance& prov) {
  CsvTable csv(prov, {"lambda", "K_omega", "label", "chi1", "chi2", "period", "rho_min",
                      "rho_max", "escaped_fraction"});
  for (const RegimeCell& c : scan.cells) {
    csv.row({fmt(c.lambda), fmt(c.K_omega), to_string(c.label), fmt(c.chi1), fmt(c.chi2),
             std::to_string(c.period), fmt(c.rho_min), fmt(c.rho_max),
             fmt(c.escaped_fraction)});
  }
  return csv.str();
}

Json scan_json(const ScanResult& scan, const Budget& b, const RunConfig& config,
               const Provenance& prov) {
  Json columns = Json::array();
  Json verdicts = Json::array();
  for (std::size_t j = 0; j < scan.grid.k_omegas.size(); ++j) {
    Json col = {{"K_omega", scan.grid.k_omegas[j]}, {"t2_hat", nullptr}, {"t1_hat", nullptr}};
    if (scan.t2_hat[j]) col["t2_hat"] = *scan.t2_hat[j];
    if (scan.t1_hat[j]) col["t1_hat"] = *scan.t1_hat[j];
    columns.push_back(col);
    const bool ok = !(scan.t1_hat[j] && scan.t2_hat[j] && *scan.t2_hat[j] > *scan.t1_hat[j]);
    verdicts.push_back(verdict_json("t2_hat <= t1_hat", ok, col));
  }
  Json failures = Json::array();
  for (const RegimeCell& c : scan.cells) {
    if (!c.failure.empty()) {
      failures.push_back({{"lambda", c.lambda}, {"K_omega", c.K_omega}, {"error", c.failure}});
    }
  }
  Json doc = envelope("scan", constants_json(config.params), b.iterates, verdicts, prov,
                      {{"lambdas", scan.grid.lambdas}, {"k_omegas", scan.grid.k_omegas}},
                      {{"start", point_json(b.seed)}, {"rotation_seeds", b.rotation_seeds}},
                      {{"chi_threshold", b.chi_threshold},
                       {"curve_threshold", b.curve_threshold},
                       {"curve_bins", b.curve_bins},
                       {"recurrence", b.recurrence},
                       {"period_cap", b.period_cap}});
  doc["results"] = {{"rows", scan.grid.lambdas.size()},
                    {"columns", scan.grid.k_omegas.size()},
                    {"boundaries", columns},
                    {"ordering_holds", scan.boundary_ordering_holds()},
                    {"failures", failures}};
  return doc;
}

}  // namespace bykov::io
