#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bykov/return_map.hpp"

namespace bykov {

/// Trajectory of the return map after a burn-in.  An orbit that leaves 𝒟
/// is truncated, not an error.
struct OrbitRecord {
  std::vector<Point> points;
  long burn_in = 0;
  bool escaped = false;
  /// Number of successful applications of the map before the escape,
  /// counted from the initial point (burn-in included).
  long escape_index = -1;
  Point escape_point{0.0, 0.0};
};

/// Applies the return map burn_in + n times and stores the last n points.
/// The stored sequence starts with 𝓕^(burn_in)(p0).
OrbitRecord iterate(const Model& model, const Point& p0, long n, long burn_in = 0);

/// Per-iterate exponents below this value are reported as the sentinel.
inline constexpr double kSaturatedNegative = -50.0;

struct LyapunovEstimate {
  double chi1 = 0.0;
  double chi2 = 0.0;
  long transient = 0;
  /// Jacobians actually accumulated.
  long iterates = 0;
  int cadence = 10;
  /// Orbit mean of ln|det D𝓕| over the same iterates.
  double mean_log_det = 0.0;
  bool chi1_saturated = false;
  bool chi2_saturated = false;
  /// The orbit escaped before half of the requested iterates.
  bool inconclusive = false;
  /// λ = 0 and y underflowed to 0: the orbit reached the network.
  bool collapsed = false;

  /// |χ1 + χ2 − mean ln|det||; meaningless when an exponent saturated.
  double determinant_residual() const;
};

/// Products of 2×2 Jacobians renormalised by a QR step every `cadence`
/// pushes.  Only logarithms are kept, so products that would underflow are
/// harmless.  ln R11 comes from the QR step; ln R22 is taken as
/// ln|det| − ln R11 with the determinant accumulated in log form, since the
/// Householder R22 is rounding noise once the two growth rates differ by
/// more than machine precision.
class LyapunovAccumulator {
 public:
  explicit LyapunovAccumulator(int cadence = 10);

  void push(const Matrix2& jacobian);
  /// Same, with ln|det jacobian| supplied by the caller.
  void push(const Matrix2& jacobian, double log_abs_det);
  long steps() const { return steps_; }
  /// Per-step exponents of everything pushed so far (pending block included).
  LyapunovEstimate estimate() const;

 private:
  void renormalise(Matrix2& block, double& block_log_det, Eigen::Vector2d& sums,
                   Matrix2& basis) const;

  int cadence_;
  long steps_ = 0;
  int pending_ = 0;
  Matrix2 basis_ = Matrix2::Identity();
  Matrix2 block_ = Matrix2::Identity();
  double block_log_det_ = 0.0;
  Eigen::Vector2d log_sums_ = Eigen::Vector2d::Zero();
};

struct LyapunovOptions {
  long transient = 1000;
  int cadence = 10;
};

/// Exponents along the orbit of p0 over n iterates after the transient.
/// Requires n ≥ 10⁴.
LyapunovEstimate lyapunov(const Model& model, const Point& p0, long n,
                          const LyapunovOptions& options = {});

using Observable = std::function<double(const Point&)>;

struct BirkhoffAverage {
  double value = 0.0;
  /// |A(n) − A(⌊3n/4⌋)| for the running mean A.
  double drift = 0.0;
  long samples = 0;
  /// The orbit escaped, so the average covers a truncated record.
  bool partial = false;
};

BirkhoffAverage birkhoff_average(const OrbitRecord& orbit, const Observable& phi);

struct Autocorrelation {
  /// Normalised autocovariance at lags 0..max_lag.
  std::vector<double> rho;
  /// Fitted |ρ_k| ≈ C τ^k.
  double tau = 0.0;
  double r_squared = 0.0;
  /// Lags used by the fit (consecutive lags with |ρ_k| above the noise floor).
  int fit_lags = 0;
  /// 3/√N: correlations below this are treated as noise.
  double noise_floor = 0.0;
  bool poor_fit = false;
  /// Observable has (near) zero variance.
  bool undefined = false;
};

/// Requires series length ≥ 10·max_lag.
Autocorrelation autocorrelation(const std::vector<double>& series, int max_lag);
Autocorrelation autocorrelation(const OrbitRecord& orbit, const Observable& phi,
                                int max_lag);

/// Per-seed mean x-lift displacement of the return map, in turns per iterate.
struct RotationSet {
  double rho_min = 0.0;
  double rho_max = 0.0;
  std::vector<double> per_seed;
  int seeds_escaped = 0;
  long iterations = 0;
  bool valid = false;

  double width() const { return rho_max - rho_min; }
  double escaped_fraction() const;
};

/// Lift displacement ξ + λΦ1 − K_ω ln(y + λΦ2) summed along each seed's
/// orbit after burn_in.  Requires λ > 0: at λ = 0, yₙ → 0 drives the
/// logarithm to infinity.
RotationSet rotation_set_2d(const Model& model, const std::vector<Point>& seeds,
                            long n, long burn_in = 1000);

}  // namespace bykov
