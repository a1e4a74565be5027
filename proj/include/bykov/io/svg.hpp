#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bykov/circle_map.hpp"
#include "bykov/io/output.hpp"
#include "bykov/regime.hpp"

namespace bykov::io {

struct SvgStyle {
  int width = 720;
  int height = 480;
  int margin = 60;
  /// Fraction of the data span added on each side of a continuous axis.
  double padding = 0.05;
};

/// Fill colour of a regime label.
const char* regime_colour(RegimeLabel label);

/// Regime map: one <rect class="cell"> per grid cell (λ up, K_ω across),
/// plus a legend.  Empty when the scan has no cells.
std::optional<std::string> scan_svg(const ScanResult& scan, const Provenance& provenance,
                                    const SvgStyle& style = {});

/// Sampled graph of one h_a with its critical points.
struct CircleMapPanel {
  double K_omega = 0.0;
  double a = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> critical;
  std::vector<double> critical_values;
};

CircleMapPanel circle_map_panel(const CircleMapFamily& family, double a, int samples);

/// One <g class="panel"> per entry, laid out on a near-square grid.  Empty
/// when there are no panels or a panel has no samples.
std::optional<std::string> circle_map_svg(const std::vector<CircleMapPanel>& panels,
                                          const Provenance& provenance,
                                          const SvgStyle& style = {});

/// Scatter of (x, y) orbit points.  Empty when there are no points.
std::optional<std::string> orbit_svg(const std::vector<Point>& points,
                                     const Provenance& provenance,
                                     const SvgStyle& style = {});

}  // namespace bykov::io
