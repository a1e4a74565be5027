#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bykov/audit.hpp"
#include "bykov/misiurewicz.hpp"
#include "bykov/orbit.hpp"
#include "bykov/params.hpp"
#include "bykov/perturbation.hpp"
#include "bykov/regime.hpp"
#include "bykov/singular_limit.hpp"
#include "bykov/superstable.hpp"

namespace bykov::io {

using Json = nlohmann::ordered_json;

struct IterateSection {
  Point p0{1.0, 0.5};
  long n = 10000;
  long burn_in = 0;
  /// Lags of the x-autocorrelation reported with the orbit.
  int max_lag = 50;
  bool plot = true;
};

struct LyapunovSection {
  Point p0{1.0, 0.5};
  long n = 100000;
  LyapunovOptions options;
};

struct ScanSection {
  ScanGrid grid;
  Budget budget;
  bool plot = true;
};

struct FractionSection {
  double r = 0.05;
  int samples = 100;
  Budget budget;
};

struct AuditSection {
  AuditOptions options;
  std::optional<FractionSection> fraction;
};

struct MisiurewiczSection {
  /// Without a, the H4 scan picks the passing a with the largest λ0.
  std::optional<double> a;
  H4Options scan;
  std::optional<ColletEckmannOptions> collet_eckmann;
};

struct SuperstableSection {
  SuperstableOptions options;
};

struct RotationSection {
  /// Circle-map rotation interval of h_a; skipped when absent.
  std::optional<double> a;
  int n_iter = 10000;
  int n_seeds = 16;
  /// Rotation set of the return map at the model's λ; needs λ > 0.
  std::vector<Point> seeds;
  long n = 100000;
  long burn_in = 1000;
};

struct SingularLimitSection {
  double a = 1.0;
  int n_min = 3;
  int n_max = 12;
  ConvergenceGrid grid;
  /// Twisting numbers of the h_a panels.
  std::vector<double> panel_k_omegas{0.3, 0.5, 2.0, 5.0};
  double panel_a = 0.0;
  int panel_samples = 512;
  bool plot = true;
};

/// A parsed run configuration.  Physical parameters have no defaults; every
/// command option does, and `resolved()` lists all of them.
struct RunConfig {
  ModelParams params;
  Perturbation pert;
  /// The perturbation as written, normalised.
  Json pert_spec;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";

  std::optional<IterateSection> iterate;
  std::optional<LyapunovSection> lyapunov;
  std::optional<ScanSection> scan;
  std::optional<AuditSection> audit;
  std::optional<MisiurewiczSection> misiurewicz;
  std::optional<SuperstableSection> superstable;
  std::optional<RotationSection> rotation;
  std::optional<SingularLimitSection> singular_limit;

  /// The full configuration with defaults filled in.
  Json resolved() const;
};

/// Parses and validates a configuration document.  Unknown keys, wrong
/// types and model-invariant violations throw ConfigError.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Sets the seed and propagates it to every seeded option.
void apply_seed(RunConfig& config, std::uint64_t seed);

/// Lowercase hex SHA-256 of `text`.
std::string sha256_hex(const std::string& text);

}  // namespace bykov::io
