#include "bykov/io/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace bykov::io {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Reads fields of a JSON object and remembers which keys were consumed, so
// that leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  template <class T>
  void operator()(const std::string& key, T& out) {
    if (!has(key)) return;
    used_.insert(key);
    read(node_.at(key), join(path_, key), out);
  }

  template <class T>
  void required(const std::string& key, T& out) {
    if (!has(key)) throw ConfigError("missing required key " + join(path_, key));
    (*this)(key, out);
  }

  template <class T>
  void nest(const std::string& key, T& out) {
    if (!has(key)) return;
    used_.insert(key);
    Reader sub(node_.at(key), join(path_, key));
    fields(sub, out);
    sub.done();
  }

  template <class T>
  void nest(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    if (!out) out.emplace();
    nest(key, *out);
  }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  void done() const {
    for (const auto& item : node_.items()) {
      if (!used_.count(item.key())) {
        throw ConfigError("unknown key " + join(path_, item.key()));
      }
    }
  }

  std::string where() const { return path_.empty() ? "config" : path_; }

 private:
  static void read(const Json& v, const std::string& at, double& out) {
    if (!v.is_number()) throw ConfigError(at + " must be a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(at + " must be finite");
  }
  template <class I>
    requires std::is_integral_v<I> && (!std::is_same_v<I, bool>)
  static void read(const Json& v, const std::string& at, I& out) {
    if (!v.is_number_integer()) throw ConfigError(at + " must be an integer");
    if constexpr (std::is_unsigned_v<I>) {
      if (v.is_number_unsigned()) {
        out = v.get<I>();
        return;
      }
      if (v.get<long long>() < 0) throw ConfigError(at + " must be non-negative");
    }
    out = v.get<I>();
  }
  static void read(const Json& v, const std::string& at, bool& out) {
    if (!v.is_boolean()) throw ConfigError(at + " must be true or false");
    out = v.get<bool>();
  }
  static void read(const Json& v, const std::string& at, Point& out) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(at + " must be [x, y]");
    read(v[0], at + "[0]", out.x);
    read(v[1], at + "[1]", out.y);
  }
  template <class T>
  static void read(const Json& v, const std::string& at, std::vector<T>& out) {
    if (!v.is_array()) throw ConfigError(at + " must be an array");
    out.assign(v.size(), T{});
    for (std::size_t i = 0; i < v.size(); ++i) {
      read(v[i], at + "[" + std::to_string(i) + "]", out[i]);
    }
  }
  template <class T>
  static void read(const Json& v, const std::string& at, std::optional<T>& out) {
    T value{};
    read(v, at, value);
    out = value;
  }

  const Json& node_;
  std::string path_;
  std::set<std::string> used_;
};

// Writes the same fields back out, defaults included.
class Writer {
 public:
  Json node = Json::object();

  template <class T>
  void operator()(const std::string& key, const T& value) {
    if constexpr (requires { value.has_value(); }) {
      if (value) node[key] = write(*value);
    } else {
      node[key] = write(value);
    }
  }
  template <class T>
  void required(const std::string& key, const T& value) {
    (*this)(key, value);
  }
  template <class T>
  void nest(const std::string& key, T& value) {
    if constexpr (requires { value.has_value(); }) {
      if (!value) return;
      Writer sub;
      fields(sub, *value);
      node[key] = std::move(sub.node);
    } else {
      Writer sub;
      fields(sub, value);
      node[key] = std::move(sub.node);
    }
  }

 private:
  template <class T>
  static Json write(const T& v) {
    if constexpr (std::is_same_v<T, Point>) {
      return Json::array({v.x, v.y});
    } else if constexpr (requires { v.begin(); v.size(); } && !std::is_same_v<T, std::string>) {
      Json arr = Json::array();
      for (const auto& e : v) arr.push_back(write(e));
      return arr;
    } else {
      return Json(v);
    }
  }
};

// Field lists shared by Reader and Writer.

template <class V>
void fields(V& v, ModelParams& p) {
  v.required("C1", p.C1);
  v.required("E1", p.E1);
  v.required("omega1", p.omega1);
  v.required("C2", p.C2);
  v.required("E2", p.E2);
  v.required("omega2", p.omega2);
  v.required("xi", p.xi);
  v.required("lambda", p.lambda);
}

template <class V>
void fields(V& v, Budget& b) {
  v("burn_in", b.burn_in);
  v("iterates", b.iterates);
  v("tail", b.tail);
  v("chi_threshold", b.chi_threshold);
  v("curve_threshold", b.curve_threshold);
  v("curve_bins", b.curve_bins);
  v("recurrence", b.recurrence);
  v("period_cap", b.period_cap);
  v("rotation_seeds", b.rotation_seeds);
  v("start", b.seed);
}

template <class V>
void fields(V& v, IterateSection& s) {
  v("p0", s.p0);
  v("n", s.n);
  v("burn_in", s.burn_in);
  v("max_lag", s.max_lag);
  v("plot", s.plot);
}

template <class V>
void fields(V& v, LyapunovSection& s) {
  v("p0", s.p0);
  v("n", s.n);
  v("transient", s.options.transient);
  v("cadence", s.options.cadence);
}

template <class V>
void fields(V& v, ScanSection& s) {
  v.required("lambdas", s.grid.lambdas);
  v.required("k_omegas", s.grid.k_omegas);
  v.nest("budget", s.budget);
  v("plot", s.plot);
}

template <class V>
void fields(V& v, FractionSection& s) {
  v("r", s.r);
  v("samples", s.samples);
  v.nest("budget", s.budget);
}

template <class V>
void fields(V& v, H1Options& o) {
  v("lambda_lo", o.lambda_lo);
  v("lambda_hi", o.lambda_hi);
  v("lambda_samples", o.lambda_samples);
  v("point_samples", o.point_samples);
  v("ybar_max", o.ybar_max);
  v("ratio_cap", o.ratio_cap);
  v("injectivity_points", o.injectivity_points);
  v("image_tolerance", o.image_tolerance);
  v("domain_tolerance", o.domain_tolerance);
}

template <class V>
void fields(V& v, ConvergenceGrid& g) {
  v("nx", g.nx);
  v("ny", g.ny);
  v("ybar_max", g.ybar_max);
  v("h1", g.h1);
  v("h2", g.h2);
}

template <class V>
void fields(V& v, H23Options& o) {
  v("a", o.a);
  v("n_min", o.n_min);
  v("n_max", o.n_max);
  v("tolerance", o.tolerance);
  v("trailing_rows", o.trailing_rows);
  v("error_floor", o.error_floor);
  v("scale_with_twist", o.scale_with_twist);
  v.nest("grid", o.grid);
}

template <class V>
void fields(V& v, MisiurewiczOptions& o) {
  v("delta0", o.delta0);
  v("horizon", o.horizon);
  v("seeds", o.seeds);
  v("delta_fraction", o.delta_fraction);
  v("curvature_samples", o.curvature_samples);
  v("critical_grid", o.critical_grid);
}

template <class V>
void fields(V& v, H4Options& o) {
  v("a_lo", o.a_lo);
  v("a_hi", o.a_hi);
  v("a_samples", o.a_samples);
  v.nest("misiurewicz", o.misiurewicz);
}

template <class V>
void fields(V& v, H5Options& o) {
  v("threshold", o.threshold);
  v("step", o.step);
  v("consistency_steps", o.consistency_steps);
  v("horizon", o.horizon);
  v("delta0", o.delta0);
}

template <class V>
void fields(V& v, H6Options& o) {
  v("step", o.step);
  v("min_magnitude", o.min_magnitude);
}

template <class V>
void fields(V& v, AuditSection& s) {
  v.nest("h1", s.options.h1);
  v.nest("h23", s.options.h23);
  v.nest("h4", s.options.h4);
  v.nest("h5", s.options.h5);
  v.nest("h6", s.options.h6);
  v("h7_power_cap", s.options.h7_power_cap);
  v.nest("fraction", s.fraction);
}

template <class V>
void fields(V& v, ColletEckmannOptions& o) {
  v("lambda", o.lambda_ce);
  v("alpha", o.alpha);
  v("horizon", o.horizon);
  v("b0_override", o.b0_override);
}

template <class V>
void fields(V& v, MisiurewiczSection& s) {
  v("a", s.a);
  v.nest("scan", s.scan);
  v.nest("collet_eckmann", s.collet_eckmann);
}

template <class V>
void fields(V& v, SuperstableSection& s) {
  v("period", s.options.period);
  v("a_lo", s.options.a_lo);
  v("a_hi", s.options.a_hi);
  v("a_grid", s.options.a_grid);
  v("tolerance", s.options.tolerance);
  v("pullback_count", s.options.pullback_count);
  v("critical_grid", s.options.critical_grid);
}

template <class V>
void fields(V& v, RotationSection& s) {
  v("a", s.a);
  v("n_iter", s.n_iter);
  v("n_seeds", s.n_seeds);
  v("seeds", s.seeds);
  v("n", s.n);
  v("burn_in", s.burn_in);
}

template <class V>
void fields(V& v, SingularLimitSection& s) {
  v("a", s.a);
  v("n_min", s.n_min);
  v("n_max", s.n_max);
  v.nest("grid", s.grid);
  v("panel_k_omegas", s.panel_k_omegas);
  v("panel_a", s.panel_a);
  v("panel_samples", s.panel_samples);
  v("plot", s.plot);
}

// ---------------------------------------------------------------------------

TrigSeries read_series(const Json& node, const std::string& at) {
  Reader r(node, at);
  TrigSeries s;
  r.required("constant", s.constant);
  if (r.has("harmonics")) {
    const Json& hs = r.raw("harmonics");
    if (!hs.is_array()) throw ConfigError(at + ".harmonics must be an array");
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const std::string hat = at + ".harmonics[" + std::to_string(i) + "]";
      Reader hr(hs[i], hat);
      Harmonic h;
      hr.required("k", h.k);
      hr("cos", h.cos_coef);
      hr("sin", h.sin_coef);
      hr.done();
      if (h.k < 1) throw ConfigError(hat + ".k must be >= 1");
      s.harmonics.push_back(h);
    }
  }
  r.done();
  return s;
}

Json write_series(const TrigSeries& s) {
  Json hs = Json::array();
  for (const auto& h : s.harmonics) {
    hs.push_back({{"k", h.k}, {"cos", h.cos_coef}, {"sin", h.sin_coef}});
  }
  return {{"constant", s.constant}, {"harmonics", hs}};
}

CylinderFunction read_cylinder(const Json& node, const std::string& at) {
  // Either one series (y-independent) or a list indexed by the power of y.
  if (node.is_object()) return CylinderFunction(read_series(node, at));
  if (!node.is_array() || node.empty()) {
    throw ConfigError(at + " must be a series object or a nonempty array of them");
  }
  std::vector<TrigSeries> terms;
  for (std::size_t i = 0; i < node.size(); ++i) {
    terms.push_back(read_series(node[i], at + "[" + std::to_string(i) + "]"));
  }
  return CylinderFunction(std::move(terms));
}

Json write_cylinder(const CylinderFunction& f) {
  Json arr = Json::array();
  for (const auto& t : f.terms()) arr.push_back(write_series(t));
  return arr;
}

Perturbation read_perturbation(const Json& node, Json& spec) {
  Reader r(node, "perturbation");
  std::string family;
  if (!r.has("family") || !node.at("family").is_string()) {
    throw ConfigError("perturbation.family must be a string");
  }
  family = r.raw("family").get<std::string>();
  spec = Json::object();
  spec["family"] = family;
  Perturbation p;
  if (family == "reference") {
    p = Perturbation::reference();
  } else if (family == "constant") {
    double c = 0.0;
    r.required("c", c);
    p = Perturbation::constant(c);
    spec["c"] = c;
  } else if (family == "offset_sine") {
    double offset = 0.0, amplitude = 0.0;
    r.required("offset", offset);
    r.required("amplitude", amplitude);
    p = Perturbation::offset_sine(offset, amplitude);
    spec["offset"] = offset;
    spec["amplitude"] = amplitude;
  } else if (family == "y_coupled") {
    double coupling = 0.0;
    r.required("coupling", coupling);
    p = Perturbation::y_coupled(coupling);
    spec["coupling"] = coupling;
  } else if (family == "custom") {
    if (!r.has("phi1") || !r.has("phi2")) {
      throw ConfigError("custom perturbation needs phi1 and phi2");
    }
    p.phi1 = read_cylinder(r.raw("phi1"), "perturbation.phi1");
    p.phi2 = read_cylinder(r.raw("phi2"), "perturbation.phi2");
    p.family = "custom";
    spec["phi1"] = write_cylinder(p.phi1);
    spec["phi2"] = write_cylinder(p.phi2);
  } else {
    throw ConfigError("unknown perturbation family '" + family + "'");
  }
  r("epsilon", p.epsilon);
  spec["epsilon"] = p.epsilon;
  r.done();
  validate(p);
  return p;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_budget(const Budget& b, const std::string& at) {
  require(b.burn_in >= 0, at + ".burn_in must be >= 0");
  require(b.iterates >= 10000, at + ".iterates must be >= 10000");
  require(b.tail >= 2, at + ".tail must be >= 2");
  require(b.chi_threshold > 0.0, at + ".chi_threshold must be > 0");
  require(b.curve_threshold > 0.0, at + ".curve_threshold must be > 0");
  require(b.curve_bins >= 2, at + ".curve_bins must be >= 2");
  require(b.recurrence > 0.0, at + ".recurrence must be > 0");
  require(b.period_cap >= 1, at + ".period_cap must be >= 1");
  require(b.rotation_seeds >= 0, at + ".rotation_seeds must be >= 0");
}

void check(const RunConfig& c) {
  if (c.iterate) {
    require(c.iterate->n >= 1, "iterate.n must be >= 1");
    require(c.iterate->burn_in >= 0, "iterate.burn_in must be >= 0");
    require(c.iterate->max_lag >= 1, "iterate.max_lag must be >= 1");
  }
  if (c.lyapunov) {
    require(c.lyapunov->n >= 10000, "lyapunov.n must be >= 10000");
    require(c.lyapunov->options.transient >= 0, "lyapunov.transient must be >= 0");
    require(c.lyapunov->options.cadence >= 1, "lyapunov.cadence must be >= 1");
  }
  if (c.scan) {
    const ScanGrid& g = c.scan->grid;
    require(!g.lambdas.empty() && !g.k_omegas.empty(), "scan grids must be nonempty");
    require(std::is_sorted(g.lambdas.begin(), g.lambdas.end()),
            "scan.lambdas must be sorted ascending");
    require(std::is_sorted(g.k_omegas.begin(), g.k_omegas.end()),
            "scan.k_omegas must be sorted ascending");
    require(g.lambdas.front() >= 0.0, "scan.lambdas must be >= 0");
    require(g.k_omegas.front() > 0.0, "scan.k_omegas must be > 0");
    check_budget(c.scan->budget, "scan.budget");
  }
  if (c.audit && c.audit->fraction) {
    require(c.audit->fraction->r > 0.0, "audit.fraction.r must be > 0");
    require(c.audit->fraction->samples >= 100, "audit.fraction.samples must be >= 100");
    check_budget(c.audit->fraction->budget, "audit.fraction.budget");
  }
  if (c.superstable) {
    const int p = c.superstable->options.period;
    require(p == 1 || p == 2, "superstable.period must be 1 or 2");
    require(c.superstable->options.a_lo < c.superstable->options.a_hi,
            "superstable.a_lo must be < a_hi");
  }
  if (c.rotation) {
    require(c.rotation->n_iter >= 1000, "rotation.n_iter must be >= 1000");
    require(c.rotation->n_seeds >= 1, "rotation.n_seeds must be >= 1");
    require(c.rotation->n >= 1, "rotation.n must be >= 1");
  }
  if (c.singular_limit) {
    const auto& s = *c.singular_limit;
    require(s.n_min >= 1 && s.n_min <= s.n_max, "singular_limit needs 1 <= n_min <= n_max");
    require(s.panel_samples >= 2, "singular_limit.panel_samples must be >= 2");
    for (double k : s.panel_k_omegas) {
      require(k > 0.0, "singular_limit.panel_k_omegas must be > 0");
    }
  }
}

}  // namespace

RunConfig parse_config(const Json& doc) {
  Reader top(doc, "");
  RunConfig c;
  if (!top.has("model")) throw ConfigError("missing required key model");
  top.nest("model", c.params);
  validate(c.params);
  if (!top.has("perturbation")) throw ConfigError("missing required key perturbation");
  c.pert = read_perturbation(top.raw("perturbation"), c.pert_spec);
  top("seed", c.seed);
  if (top.has("output_dir")) {
    const Json& d = top.raw("output_dir");
    if (!d.is_string()) throw ConfigError("output_dir must be a string");
    c.output_dir = d.get<std::string>();
  }
  top.nest("iterate", c.iterate);
  top.nest("lyapunov", c.lyapunov);
  top.nest("scan", c.scan);
  top.nest("audit", c.audit);
  top.nest("misiurewicz", c.misiurewicz);
  top.nest("superstable", c.superstable);
  top.nest("rotation", c.rotation);
  top.nest("singular_limit", c.singular_limit);
  top.done();
  apply_seed(c, c.seed);
  check(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void apply_seed(RunConfig& c, std::uint64_t seed) {
  c.seed = seed;
  if (c.audit) c.audit->options.h1.seed = seed;
}

Json RunConfig::resolved() const {
  RunConfig copy = *this;
  Json out = Json::object();
  {
    Writer w;
    fields(w, copy.params);
    out["model"] = std::move(w.node);
  }
  out["perturbation"] = pert_spec;
  out["seed"] = seed;
  Writer w;
  w.nest("iterate", copy.iterate);
  w.nest("lyapunov", copy.lyapunov);
  w.nest("scan", copy.scan);
  w.nest("audit", copy.audit);
  w.nest("misiurewicz", copy.misiurewicz);
  w.nest("superstable", copy.superstable);
  w.nest("rotation", copy.rotation);
  w.nest("singular_limit", copy.singular_limit);
  for (auto& item : w.node.items()) out[item.key()] = item.value();
  return out;
}

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace bykov::io
