#include "bykov/regime.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace bykov {

const char* to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::InvariantCurve: return "InvariantCurve";
    case RegimeLabel::PeriodicSink: return "PeriodicSink";
    case RegimeLabel::TransientChaos: return "TransientChaos";
    case RegimeLabel::StrangeAttractorCandidate: return "StrangeAttractorCandidate";
    case RegimeLabel::Escaped: return "Escaped";
  }
  return "Unknown";
}

int detect_period(const std::vector<Point>& pts, int cap, double tol) {
  const long N = static_cast<long>(pts.size());
  for (int p = 1; p <= cap; ++p) {
    if (2L * p > N) break;
    bool closed = true;
    for (int j = 0; j < p && closed; ++j) {
      const Point& a = pts[N - 1 - j];
      const Point& b = pts[N - 1 - j - p];
      closed = circle_distance(a.x, b.x) + std::abs(a.y - b.y) <= tol;
    }
    if (closed) return p;
  }
  return 0;
}

double transverse_thickness(const std::vector<Point>& pts, int bins) {
  if (bins < 2) throw std::invalid_argument("thickness needs >= 2 bins");
  if (pts.empty()) return 0.0;
  double ylo = pts.front().y, yhi = ylo;
  std::vector<double> sum(bins, 0.0);
  std::vector<long> count(bins, 0);
  const auto bin_of = [&](double x) {
    return std::min(bins - 1, static_cast<int>(wrap_angle(x) / kTwoPi * bins));
  };
  for (const Point& p : pts) {
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
    const int b = bin_of(p.x);
    sum[b] += p.y;
    ++count[b];
  }
  const double extent = yhi - ylo;
  if (!(extent > 0.0)) return 0.0;
  // Bin means at bin centres, linearly interpolated around the circle.
  std::vector<int> filled;
  for (int b = 0; b < bins; ++b) {
    if (count[b] > 0) filled.push_back(b);
  }
  const auto centre = [&](int b) { return kTwoPi * (b + 0.5) / bins; };
  const auto mean = [&](int b) { return sum[b] / count[b]; };
  double worst = 0.0;
  for (const Point& p : pts) {
    const double x = wrap_angle(p.x);
    double g;
    if (filled.size() == 1) {
      g = mean(filled.front());
    } else {
      // Neighbouring filled bins on either side of x.
      auto it = std::upper_bound(filled.begin(), filled.end(), x,
                                 [&](double v, int b) { return v < centre(b); });
      const int right = it == filled.end() ? filled.front() : *it;
      const int left = it == filled.begin() ? filled.back() : *(it - 1);
      double xl = centre(left), xr = centre(right);
      double xx = x;
      if (xr <= xl) xr += kTwoPi;
      if (xx < xl) xx += kTwoPi;
      const double t = (xr > xl) ? (xx - xl) / (xr - xl) : 0.0;
      g = (1.0 - t) * mean(left) + t * mean(right);
    }
    worst = std::max(worst, std::abs(p.y - g));
  }
  return worst / extent;
}

RegimeCell classify_cell(double lambda, double K_omega, const ModelParams& base,
                         const Perturbation& pert, const Budget& budget) {
  RegimeCell cell;
  cell.lambda = lambda;
  cell.K_omega = K_omega;
  ModelParams params = with_twist(base, K_omega);
  params.lambda = lambda;
  const Model model(params, pert);

  const long tail = std::min(budget.tail, budget.iterates);
  const OrbitRecord rec =
      iterate(model, budget.seed, tail, budget.burn_in + budget.iterates - tail);
  if (rec.escaped) {
    cell.label = RegimeLabel::Escaped;
    cell.escaped_fraction = 1.0;
    return cell;
  }
  const LyapunovEstimate le =
      lyapunov(model, budget.seed, budget.iterates, {budget.burn_in, 10});
  cell.chi1 = le.chi1;
  cell.chi2 = le.chi2;

  std::vector<Point> seeds;
  for (int s = 0; s < budget.rotation_seeds; ++s) {
    seeds.push_back({kTwoPi * (s + 0.5) / budget.rotation_seeds, budget.seed.y});
  }
  if (lambda > 0.0 && !seeds.empty()) {
    const RotationSet rs = rotation_set_2d(model, seeds, budget.iterates, budget.burn_in);
    cell.rho_min = rs.rho_min;
    cell.rho_max = rs.rho_max;
    cell.escaped_fraction = rs.escaped_fraction();
  }

  cell.period = detect_period(rec.points, budget.period_cap, budget.recurrence);
  cell.thickness = transverse_thickness(rec.points, budget.curve_bins);
  if (cell.period > 0 && cell.chi1 < -budget.chi_threshold) {
    cell.label = RegimeLabel::PeriodicSink;
  } else if (cell.chi1 > budget.chi_threshold) {
    cell.label = RegimeLabel::StrangeAttractorCandidate;
    cell.period = 0;
  } else if (cell.thickness < budget.curve_threshold &&
             std::abs(cell.chi1) <= budget.chi_threshold) {
    cell.label = RegimeLabel::InvariantCurve;
  } else {
    cell.label = RegimeLabel::TransientChaos;
  }
  return cell;
}

bool ScanResult::boundary_ordering_holds() const {
  for (std::size_t j = 0; j < t1_hat.size(); ++j) {
    if (t1_hat[j] && t2_hat[j] && *t2_hat[j] > *t1_hat[j]) return false;
  }
  return true;
}

ScanResult scan(const ScanGrid& grid, const ModelParams& base, const Perturbation& pert,
                const Budget& budget, unsigned threads) {
  if (!std::is_sorted(grid.lambdas.begin(), grid.lambdas.end()) ||
      !std::is_sorted(grid.k_omegas.begin(), grid.k_omegas.end())) {
    throw std::invalid_argument("scan grids must be sorted ascending");
  }
  ScanResult res;
  res.grid = grid;
  const std::size_t nl = grid.lambdas.size(), nk = grid.k_omegas.size();
  res.cells.resize(nl * nk);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, nl * nk)));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t idx = next++; idx < res.cells.size(); idx = next++) {
      const double lam = grid.lambdas[idx / nk];
      const double K = grid.k_omegas[idx % nk];
      try {
        res.cells[idx] = classify_cell(lam, K, base, pert, budget);
      } catch (const std::exception& e) {
        RegimeCell c;
        c.lambda = lam;
        c.K_omega = K;
        c.failure = e.what();
        res.cells[idx] = c;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  res.t2_hat.assign(nk, std::nullopt);
  res.t1_hat.assign(nk, std::nullopt);
  for (std::size_t j = 0; j < nk; ++j) {
    for (std::size_t i = 0; i < nl; ++i) {
      const RegimeLabel l = res.at(i, j).label;
      if (!res.t2_hat[j] && l != RegimeLabel::InvariantCurve) res.t2_hat[j] = grid.lambdas[i];
      if (!res.t1_hat[j] && l == RegimeLabel::StrangeAttractorCandidate) {
        res.t1_hat[j] = grid.lambdas[i];
      }
    }
  }
  return res;
}

}  // namespace bykov
