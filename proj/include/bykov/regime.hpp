#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bykov/orbit.hpp"

namespace bykov {

enum class RegimeLabel {
  InvariantCurve,
  PeriodicSink,
  TransientChaos,
  StrangeAttractorCandidate,
  Escaped
};

const char* to_string(RegimeLabel label);

/// Iterate counts and thresholds of the classification decision tree.
struct Budget {
  long burn_in = 10000;
  long iterates = 100000;
  /// Points of the tail used for period and thickness detection.
  long tail = 8192;
  double chi_threshold = 5e-3;
  /// Transverse thickness of the orbit closure, relative to its y-extent.
  double curve_threshold = 0.05;
  int curve_bins = 64;
  double recurrence = 1e-8;
  int period_cap = 64;
  int rotation_seeds = 4;
  Point seed{1.0, 0.5};
};

struct RegimeCell {
  double lambda = 0.0;
  double K_omega = 0.0;
  RegimeLabel label = RegimeLabel::Escaped;
  /// Detected period, 0 when none.
  int period = 0;
  double chi1 = 0.0;
  double chi2 = 0.0;
  double thickness = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double escaped_fraction = 0.0;
  /// Non-escape failure recorded by a scan; empty otherwise.
  std::string failure;
};

/// Least p ≤ cap with |P_{N−j} − P_{N−j−p}| ≤ tol for a whole cycle
/// j = 0..p−1 at the end of `points`; 0 when there is none.
int detect_period(const std::vector<Point>& points, int cap, double tol);

/// Largest residual of y about the binned mean curve y ≈ g(x), divided by
/// the y-extent of the sample.  Small for the graph of a closed curve,
/// order one once the closure folds over itself.
double transverse_thickness(const std::vector<Point>& points, int bins);

/// Decision tree: period ⇒ PeriodicSink; χ1 > χ_thresh ⇒
/// StrangeAttractorCandidate; thin with |χ1| ≤ χ_thresh ⇒ InvariantCurve;
/// otherwise TransientChaos.  Escapes give Escaped.
RegimeCell classify_cell(double lambda, double K_omega, const ModelParams& base,
                         const Perturbation& pert, const Budget& budget = {});

struct ScanGrid {
  std::vector<double> lambdas;
  std::vector<double> k_omegas;
};

struct ScanResult {
  ScanGrid grid;
  /// Row-major: cells[i * k_omegas.size() + j] is (lambdas[i], k_omegas[j]).
  std::vector<RegimeCell> cells;
  /// Per K_ω column: least λ whose label is not InvariantCurve.
  std::vector<std::optional<double>> t2_hat;
  /// Per K_ω column: least λ labelled StrangeAttractorCandidate.
  std::vector<std::optional<double>> t1_hat;

  const RegimeCell& at(std::size_t i, std::size_t j) const {
    return cells[i * grid.k_omegas.size() + j];
  }
  /// t̂2 ≤ t̂1 in every column where both exist.
  bool boundary_ordering_holds() const;
};

/// Classifies every cell on `threads` workers (0 = hardware concurrency).
/// Cells are written by grid index, so the result does not depend on the
/// thread count.  Grids must be sorted ascending.
ScanResult scan(const ScanGrid& grid, const ModelParams& base, const Perturbation& pert,
                const Budget& budget = {}, unsigned threads = 0);

}  // namespace bykov
