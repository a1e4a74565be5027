#include "bykov/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bykov {

OrbitRecord iterate(const Model& model, const Point& p0, long n, long burn_in) {
  if (n < 0 || burn_in < 0) throw std::invalid_argument("iterate needs n, burn_in >= 0");
  OrbitRecord rec;
  rec.burn_in = burn_in;
  rec.points.reserve(static_cast<std::size_t>(n));
  Point p = p0;
  const long total = burn_in + n;
  for (long k = 0; k < total; ++k) {
    if (k >= burn_in) rec.points.push_back(p);
    if (k + 1 == total) break;
    const auto q = try_return_map(p, model);
    if (!q) {
      rec.escaped = true;
      rec.escape_index = k;
      rec.escape_point = p;
      break;
    }
    p = *q;
  }
  return rec;
}

double LyapunovEstimate::determinant_residual() const {
  return std::abs(chi1 + chi2 - mean_log_det);
}

LyapunovAccumulator::LyapunovAccumulator(int cadence) : cadence_(cadence) {
  if (cadence < 1) throw std::invalid_argument("renormalisation cadence must be >= 1");
}

void LyapunovAccumulator::renormalise(Matrix2& block, double& block_log_det,
                                      Eigen::Vector2d& sums, Matrix2& basis) const {
  const Matrix2 M = block * basis;
  Eigen::HouseholderQR<Matrix2> qr(M);
  Matrix2 Q = qr.householderQ();
  const double r11 = qr.matrixQR()(0, 0);
  if (r11 < 0.0) Q.col(0) *= -1.0;
  // Keep Q a rotation so the basis orientation is preserved.
  if (Q.determinant() < 0.0) Q.col(1) *= -1.0;
  const double log_r11 = std::log(std::abs(r11));
  sums(0) += log_r11;
  sums(1) += block_log_det - log_r11;
  basis = Q;
  block.setIdentity();
  block_log_det = 0.0;
}

void LyapunovAccumulator::push(const Matrix2& jacobian) {
  push(jacobian, std::log(std::abs(jacobian.determinant())));
}

void LyapunovAccumulator::push(const Matrix2& jacobian, double log_abs_det) {
  block_ = jacobian * block_;
  block_log_det_ += log_abs_det;
  ++steps_;
  if (++pending_ == cadence_) {
    renormalise(block_, block_log_det_, log_sums_, basis_);
    pending_ = 0;
  }
}

LyapunovEstimate LyapunovAccumulator::estimate() const {
  LyapunovEstimate e;
  e.cadence = cadence_;
  e.iterates = steps_;
  if (steps_ == 0) return e;
  Eigen::Vector2d sums = log_sums_;
  if (pending_ > 0) {
    Matrix2 block = block_, basis = basis_;
    double log_det = block_log_det_;
    renormalise(block, log_det, sums, basis);
  }
  const double n = static_cast<double>(steps_);
  double chi[2] = {sums(0) / n, sums(1) / n};
  bool sat[2] = {false, false};
  for (int i = 0; i < 2; ++i) {
    if (!(chi[i] >= kSaturatedNegative)) {  // also catches −inf and NaN
      chi[i] = kSaturatedNegative;
      sat[i] = true;
    }
  }
  if (chi[1] > chi[0]) {
    std::swap(chi[0], chi[1]);
    std::swap(sat[0], sat[1]);
  }
  e.chi1 = chi[0];
  e.chi2 = chi[1];
  e.chi1_saturated = sat[0];
  e.chi2_saturated = sat[1];
  return e;
}

LyapunovEstimate lyapunov(const Model& model, const Point& p0, long n,
                          const LyapunovOptions& opt) {
  if (n < 10000) throw std::invalid_argument("lyapunov needs n >= 10^4 iterates");
  if (opt.transient < 0) throw std::invalid_argument("negative transient");
  // At λ = 0 the height collapses superexponentially onto the network;
  // past this level the Jacobian entries overflow.
  const auto collapsed = [&](const Point& q) {
    return model.lambda() == 0.0 && q.y < 1e-100;
  };
  LyapunovAccumulator acc(opt.cadence);
  double log_det_sum = 0.0;
  bool escaped = false, hit_network = false;
  Point p = p0;
  for (long k = 0; k < opt.transient + n; ++k) {
    if (collapsed(p)) {
      hit_network = true;
      break;
    }
    const auto q = try_return_map(p, model);
    if (!q) {
      escaped = true;
      break;
    }
    if (k >= opt.transient) {
      const double log_det = std::log(std::abs(return_map_determinant(p, model)));
      acc.push(jacobian(MapId::Return, p, model), log_det);
      log_det_sum += log_det;
    }
    p = *q;
  }
  LyapunovEstimate e = acc.estimate();
  e.transient = opt.transient;
  e.mean_log_det = acc.steps() > 0 ? log_det_sum / acc.steps() : 0.0;
  if (hit_network) {
    e.collapsed = true;
    e.chi2 = kSaturatedNegative;
    e.chi2_saturated = true;
  } else if (escaped && acc.steps() < n / 2) {
    e.inconclusive = true;
  }
  return e;
}

BirkhoffAverage birkhoff_average(const OrbitRecord& orbit, const Observable& phi) {
  BirkhoffAverage b;
  b.partial = orbit.escaped;
  b.samples = static_cast<long>(orbit.points.size());
  if (b.samples == 0) return b;
  const long mark = (3 * b.samples) / 4;
  double sum = 0.0, sum_at_mark = 0.0;
  for (long k = 0; k < b.samples; ++k) {
    sum += phi(orbit.points[k]);
    if (k + 1 == mark) sum_at_mark = sum;
  }
  b.value = sum / b.samples;
  b.drift = mark > 0 ? std::abs(b.value - sum_at_mark / mark) : 0.0;
  return b;
}

Autocorrelation autocorrelation(const std::vector<double>& series, int max_lag) {
  if (max_lag < 1) throw std::invalid_argument("max_lag must be >= 1");
  const std::size_t N = series.size();
  if (N < 10 * static_cast<std::size_t>(max_lag)) {
    throw std::invalid_argument("autocorrelation needs length >= 10 * max_lag");
  }
  Autocorrelation ac;
  ac.noise_floor = 3.0 / std::sqrt(static_cast<double>(N));
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / N;
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  c0 /= N;
  const double scale = std::max(1.0, std::abs(mean));
  if (!(c0 > 1e-24 * scale * scale)) {
    ac.undefined = true;
    ac.poor_fit = true;
    ac.rho.assign(max_lag + 1, std::numeric_limits<double>::quiet_NaN());
    return ac;
  }
  ac.rho.resize(max_lag + 1);
  for (int k = 0; k <= max_lag; ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i + k < N; ++i) c += (series[i] - mean) * (series[i + k] - mean);
    ac.rho[k] = c / N / c0;
  }

  // Fit ln|ρ_k| = ln C + k ln τ over lag 0 and the following lags that
  // stay above the noise floor.
  int last = 0;
  while (last + 1 <= max_lag && std::abs(ac.rho[last + 1]) > ac.noise_floor) ++last;
  ac.fit_lags = last + 1;
  if (last == 0) {
    // Correlation is already noise at lag 1.
    ac.tau = std::max(std::abs(ac.rho[1]), 0.0);
    ac.r_squared = std::numeric_limits<double>::quiet_NaN();
    ac.poor_fit = false;
    return ac;
  }
  double sk = 0, sl = 0, skk = 0, skl = 0;
  const int m = last + 1;
  for (int k = 0; k <= last; ++k) {
    const double l = std::log(std::abs(ac.rho[k]));
    sk += k;
    sl += l;
    skk += double(k) * k;
    skl += k * l;
  }
  const double slope = (m * skl - sk * sl) / (m * skk - sk * sk);
  const double icept = (sl - slope * sk) / m;
  double ss_res = 0, ss_tot = 0;
  const double lbar = sl / m;
  for (int k = 0; k <= last; ++k) {
    const double l = std::log(std::abs(ac.rho[k]));
    ss_res += (l - icept - slope * k) * (l - icept - slope * k);
    ss_tot += (l - lbar) * (l - lbar);
  }
  ac.tau = std::exp(slope);
  ac.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  // A correlation that never drops to noise does not decay.
  ac.poor_fit = last == max_lag || !(slope < 0.0) || ac.r_squared < 0.8;
  return ac;
}

Autocorrelation autocorrelation(const OrbitRecord& orbit, const Observable& phi,
                                int max_lag) {
  std::vector<double> s;
  s.reserve(orbit.points.size());
  for (const Point& p : orbit.points) s.push_back(phi(p));
  return autocorrelation(s, max_lag);
}

double RotationSet::escaped_fraction() const {
  const std::size_t total = per_seed.size() + seeds_escaped;
  return total == 0 ? 0.0 : static_cast<double>(seeds_escaped) / total;
}

RotationSet rotation_set_2d(const Model& model, const std::vector<Point>& seeds,
                            long n, long burn_in) {
  if (!(model.lambda() > 0.0)) {
    throw ConfigError("rotation set needs lambda > 0 (ln y diverges at lambda = 0)");
  }
  if (n < 1 || burn_in < 0) throw std::invalid_argument("rotation set needs n >= 1");
  RotationSet r;
  r.iterations = n;
  const Perturbation& f = model.perturbation();
  const double lam = model.lambda();
  for (const Point& s : seeds) {
    Point p = s;
    bool ok = true;
    for (long k = 0; k < burn_in && ok; ++k) {
      const auto q = try_return_map(p, model);
      if (q) p = *q; else ok = false;
    }
    double disp = 0.0;
    for (long k = 0; k < n && ok; ++k) {
      const double Y = p.y + lam * f.phi2(p.x, p.y);
      if (!(Y > 0.0)) {
        ok = false;
        break;
      }
      disp += model.xi() + lam * f.phi1(p.x, p.y) - model.K_omega() * std::log(Y);
      p = return_map(p, model);
    }
    if (!ok) {
      ++r.seeds_escaped;
      continue;
    }
    r.per_seed.push_back(disp / (kTwoPi * n));
  }
  if (r.per_seed.empty()) return r;
  const auto [lo, hi] = std::minmax_element(r.per_seed.begin(), r.per_seed.end());
  r.rho_min = *lo;
  r.rho_max = *hi;
  r.valid = true;
  return r;
}

}  // namespace bykov
