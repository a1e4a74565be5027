#include "bykov/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bykov/angle.hpp"

namespace bykov::io {

namespace {

std::string num(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string range_attr(double lo, double hi) {
  return format_double(lo) + " " + format_double(hi);
}

std::string open_svg(const SvgStyle& s, const Provenance& p, const std::string& kind,
                     const std::string& extra) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(s.width) +
         "\" height=\"" + std::to_string(s.height) + "\" viewBox=\"0 0 " +
         std::to_string(s.width) + " " + std::to_string(s.height) + "\" data-kind=\"" +
         kind + "\"" + extra + ">\n";
  out += "<!-- " + p.header() + " -->\n";
  out += "<metadata>" + p.to_json().dump() + "</metadata>\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + std::to_string(s.width) +
         "\" height=\"" + std::to_string(s.height) + "\" fill=\"white\"/>\n";
  return out;
}

// Linear map of [lo, hi] onto [a, b].
struct Axis {
  double lo, hi, a, b;
  double operator()(double v) const {
    return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : 0.5 * (a + b);
  }
};

std::pair<double, double> padded(double lo, double hi, double pad) {
  double span = hi - lo;
  if (!(span > 0.0)) span = std::max(1.0, std::abs(lo));
  return {lo - pad * span, hi + pad * span};
}

constexpr RegimeLabel kLabels[] = {RegimeLabel::InvariantCurve, RegimeLabel::PeriodicSink,
                                   RegimeLabel::TransientChaos,
                                   RegimeLabel::StrangeAttractorCandidate,
                                   RegimeLabel::Escaped};

}  // namespace

const char* regime_colour(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::InvariantCurve: return "#4c78a8";
    case RegimeLabel::PeriodicSink: return "#54a24b";
    case RegimeLabel::TransientChaos: return "#f2cf5b";
    case RegimeLabel::StrangeAttractorCandidate: return "#e45756";
    case RegimeLabel::Escaped: return "#9d9d9d";
  }
  return "#000000";
}

std::optional<std::string> scan_svg(const ScanResult& scan, const Provenance& prov,
                                    const SvgStyle& style) {
  const std::size_t nl = scan.grid.lambdas.size(), nk = scan.grid.k_omegas.size();
  if (nl == 0 || nk == 0 || scan.cells.size() != nl * nk) return std::nullopt;
  const auto& L = scan.grid.lambdas;
  const auto& K = scan.grid.k_omegas;
  const std::string extra = " data-x-range=\"" + range_attr(K.front(), K.back()) +
                            "\" data-y-range=\"" + range_attr(L.front(), L.back()) +
                            "\" data-padding=\"0\"";
  std::string out = open_svg(style, prov, "scan", extra);

  const double legend_w = 200;
  const double x0 = style.margin, x1 = style.width - legend_w;
  const double y0 = style.margin * 0.5, y1 = style.height - style.margin;
  const double cw = (x1 - x0) / nk, ch = (y1 - y0) / nl;

  out += "<g class=\"grid\">\n";
  for (std::size_t i = 0; i < nl; ++i) {
    for (std::size_t j = 0; j < nk; ++j) {
      const RegimeCell& c = scan.at(i, j);
      // λ increases upwards.
      const double x = x0 + j * cw, y = y1 - (i + 1) * ch;
      out += "<rect class=\"cell\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
             num(cw) + "\" height=\"" + num(ch) + "\" fill=\"" + regime_colour(c.label) +
             "\" stroke=\"white\" data-lambda=\"" + format_double(c.lambda) +
             "\" data-k-omega=\"" + format_double(c.K_omega) + "\" data-label=\"" +
             to_string(c.label) + "\"/>\n";
    }
  }
  out += "</g>\n<g class=\"axes\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t j = 0; j < nk; ++j) {
    out += "<text x=\"" + num(x0 + (j + 0.5) * cw) + "\" y=\"" + num(y1 + 16) +
           "\" text-anchor=\"middle\">" + tick(K[j]) + "</text>\n";
  }
  for (std::size_t i = 0; i < nl; ++i) {
    out += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(y1 - (i + 0.5) * ch + 4) +
           "\" text-anchor=\"end\">" + tick(L[i]) + "</text>\n";
  }
  out += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"" + num(y1 + 36) +
         "\" text-anchor=\"middle\">K_omega</text>\n";
  out += "<text x=\"14\" y=\"" + num(0.5 * (y0 + y1)) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " + num(0.5 * (y0 + y1)) +
         ")\">lambda</text>\n</g>\n";

  out += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  double ly = y0;
  for (RegimeLabel l : kLabels) {
    out += "<rect class=\"legend-swatch\" x=\"" + num(x1 + 16) + "\" y=\"" + num(ly) +
           "\" width=\"14\" height=\"14\" fill=\"" + regime_colour(l) + "\"/>\n";
    out += "<text x=\"" + num(x1 + 36) + "\" y=\"" + num(ly + 11) + "\">" + to_string(l) +
           "</text>\n";
    ly += 22;
  }
  out += "</g>\n</svg>\n";
  return out;
}

CircleMapPanel circle_map_panel(const CircleMapFamily& family, double a, int samples) {
  CircleMapPanel p;
  p.K_omega = family.K_omega();
  p.a = a;
  for (int i = 0; i < samples; ++i) {
    const double x = kTwoPi * i / (samples - 1);
    p.x.push_back(x);
    p.y.push_back(family.value(a, x));
  }
  for (double c : critical_points(family).points) {
    p.critical.push_back(c);
    p.critical_values.push_back(family.value(a, c));
  }
  return p;
}

std::optional<std::string> circle_map_svg(const std::vector<CircleMapPanel>& panels,
                                          const Provenance& prov, const SvgStyle& style) {
  if (panels.empty()) return std::nullopt;
  for (const auto& p : panels) {
    if (p.x.empty() || p.x.size() != p.y.size()) return std::nullopt;
  }
  const int n = static_cast<int>(panels.size());
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int rows = (n + cols - 1) / cols;
  const double pw = static_cast<double>(style.width) / cols;
  const double ph = static_cast<double>(style.height) / rows;
  const double inner = 0.5 * style.margin;

  std::string out = open_svg(style, prov, "circle-maps",
                             " data-panels=\"" + std::to_string(n) + "\"");
  for (int k = 0; k < n; ++k) {
    const CircleMapPanel& p = panels[k];
    const double ox = (k % cols) * pw, oy = (k / cols) * ph;
    const double side = std::min(pw, ph) - 2 * inner;
    const Axis X{0.0, kTwoPi, ox + inner, ox + inner + side};
    const Axis Y{0.0, kTwoPi, oy + inner + side, oy + inner};
    const auto [xlo, xhi] = std::minmax_element(p.x.begin(), p.x.end());
    const auto [ylo, yhi] = std::minmax_element(p.y.begin(), p.y.end());
    out += "<g class=\"panel\" data-k-omega=\"" + format_double(p.K_omega) + "\" data-a=\"" +
           format_double(p.a) + "\" data-x-range=\"" + range_attr(*xlo, *xhi) +
           "\" data-y-range=\"" + range_attr(*ylo, *yhi) + "\" data-view=\"0 " +
           format_double(kTwoPi) + "\">\n";
    out += "<rect class=\"frame\" x=\"" + num(X(0)) + "\" y=\"" + num(Y(kTwoPi)) +
           "\" width=\"" + num(side) + "\" height=\"" + num(side) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";
    out += "<line class=\"diagonal\" x1=\"" + num(X(0)) + "\" y1=\"" + num(Y(0)) + "\" x2=\"" +
           num(X(kTwoPi)) + "\" y2=\"" + num(Y(kTwoPi)) +
           "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
    // The graph is cut where h_a wraps around the circle.
    std::string pts;
    auto flush = [&] {
      if (!pts.empty()) {
        out += "<polyline class=\"graph\" fill=\"none\" stroke=\"#1f4e79\" points=\"" + pts +
               "\"/>\n";
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      if (i > 0 && std::abs(p.y[i] - p.y[i - 1]) > kPi) flush();
      if (!pts.empty()) pts += ' ';
      pts += num(X(p.x[i])) + "," + num(Y(p.y[i]));
    }
    flush();
    for (std::size_t i = 0; i < p.critical.size(); ++i) {
      out += "<circle class=\"critical\" cx=\"" + num(X(p.critical[i])) + "\" cy=\"" +
             num(Y(p.critical_values[i])) + "\" r=\"3.5\" fill=\"#e45756\"/>\n";
    }
    out += "<text x=\"" + num(X(0)) + "\" y=\"" + num(Y(kTwoPi) - 6) +
           "\" font-family=\"sans-serif\" font-size=\"11\">K_omega=" + tick(p.K_omega) +
           " a=" + tick(p.a) + " critical=" + std::to_string(p.critical.size()) +
           "</text>\n</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::optional<std::string> orbit_svg(const std::vector<Point>& points, const Provenance& prov,
                                     const SvgStyle& style) {
  if (points.empty()) return std::nullopt;
  double xlo = points.front().x, xhi = xlo, ylo = points.front().y, yhi = ylo;
  for (const Point& p : points) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  const auto [vxlo, vxhi] = padded(xlo, xhi, style.padding);
  const auto [vylo, vyhi] = padded(ylo, yhi, style.padding);
  const std::string extra = " data-x-range=\"" + range_attr(xlo, xhi) + "\" data-y-range=\"" +
                            range_attr(ylo, yhi) + "\" data-view-x=\"" +
                            range_attr(vxlo, vxhi) + "\" data-view-y=\"" +
                            range_attr(vylo, vyhi) + "\" data-padding=\"" +
                            format_double(style.padding) + "\"";
  std::string out = open_svg(style, prov, "orbit", extra);
  const Axis X{vxlo, vxhi, double(style.margin), double(style.width - style.margin * 0.5)};
  const Axis Y{vylo, vyhi, double(style.height - style.margin), style.margin * 0.5};
  out += "<rect class=\"frame\" x=\"" + num(X(vxlo)) + "\" y=\"" + num(Y(vyhi)) +
         "\" width=\"" + num(X(vxhi) - X(vxlo)) + "\" height=\"" + num(Y(vylo) - Y(vyhi)) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
  out += "<g class=\"axes\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<text x=\"" + num(X(vxlo)) + "\" y=\"" + num(Y(vylo) + 16) + "\">" + tick(vxlo) +
         "</text>\n";
  out += "<text x=\"" + num(X(vxhi)) + "\" y=\"" + num(Y(vylo) + 16) +
         "\" text-anchor=\"end\">" + tick(vxhi) + "</text>\n";
  out += "<text x=\"" + num(X(vxlo) - 6) + "\" y=\"" + num(Y(vylo)) +
         "\" text-anchor=\"end\">" + tick(vylo) + "</text>\n";
  out += "<text x=\"" + num(X(vxlo) - 6) + "\" y=\"" + num(Y(vyhi) + 8) +
         "\" text-anchor=\"end\">" + tick(vyhi) + "</text>\n";
  out += "<text x=\"" + num(0.5 * (X(vxlo) + X(vxhi))) + "\" y=\"" + num(Y(vylo) + 32) +
         "\" text-anchor=\"middle\">x</text>\n</g>\n";
  out += "<g class=\"points\" fill=\"#1f4e79\">\n";
  for (const Point& p : points) {
    out += "<circle class=\"point\" cx=\"" + num(X(p.x)) + "\" cy=\"" + num(Y(p.y)) +
           "\" r=\"1\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace bykov::io
