#include "bykov/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bykov {

std::vector<MonotoneBranch> monotonicity_partition(const CircleMapFamily& family,
                                                   double a,
                                                   const CriticalSet& critical) {
  if (critical.empty()) {
    throw std::invalid_argument("no monotonicity partition: empty critical set");
  }
  const std::size_t q = critical.size();
  std::vector<MonotoneBranch> out;
  out.reserve(q);
  for (std::size_t i = 0; i < q; ++i) {
    MonotoneBranch b;
    b.lo = critical.points[i];
    b.hi = i + 1 < q ? critical.points[i + 1] : critical.points[0] + kTwoPi;
    // The lift is periodic up to degree·2π, so evaluating at hi beyond 2π is
    // consistent with evaluating at lo.
    const double l0 = family.lift(a, b.lo);
    const double l1 = family.lift(a, b.hi);
    b.image_lo = std::min(l0, l1);
    b.image_hi = std::max(l0, l1);
    out.push_back(b);
  }
  return out;
}

namespace {

bool contains_mod_2pi(const MonotoneBranch& image_of, const MonotoneBranch& j) {
  if (image_of.surjective()) return true;
  const double shift = std::ceil((image_of.image_lo - j.lo) / kTwoPi);
  const double lo = j.lo + shift * kTwoPi;
  const double hi = j.hi + shift * kTwoPi;
  return lo >= image_of.image_lo && hi <= image_of.image_hi;
}

}  // namespace

std::optional<int> primitive_power(const Eigen::MatrixXi& q, int cap) {
  if (q.size() == 0) return std::nullopt;
  Eigen::MatrixXi power = q;
  for (int n = 1; n <= cap; ++n) {
    if ((power.array() > 0).all()) return n;
    power = (power * q).unaryExpr([](int v) { return v > 0 ? 1 : 0; });
  }
  return std::nullopt;
}

TransitionMatrix transition_matrix(const std::vector<MonotoneBranch>& partition,
                                   int cap) {
  const auto r = static_cast<Eigen::Index>(partition.size());
  TransitionMatrix t;
  t.q = Eigen::MatrixXi::Zero(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index m = 0; m < r; ++m) {
      t.q(i, m) = contains_mod_2pi(partition[i], partition[m]) ? 1 : 0;
    }
  }
  t.primitive_power = primitive_power(t.q, cap);
  return t;
}

SuperstableConditions superstable_conditions(const CircleMapFamily& family, double a_star,
                                             const MisiurewiczCertificate& cert) {
  SuperstableConditions s;
  s.misiurewicz = {"superstable: misiurewicz certificate", cert.pass, cert.lambda0, -1, a_star,
                   "Misiurewicz certificate at a*"};
  s.expansion = {"superstable: exp(lambda0) > ln 10", superstable_expansion_holds(cert.lambda0),
                 std::exp(cert.lambda0) - std::log(10.0), -1, 0.0,
                 "exp(lambda0) > ln 10"};
  if (cert.critical.empty()) {
    s.full_branches = {"superstable: full branches", false, 0.0, -1, 0.0, "empty critical set"};
    return s;
  }
  const auto branches = monotonicity_partition(family, a_star, cert.critical);
  double worst = std::numeric_limits<double>::infinity();
  int worst_index = -1;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const double v = branches[i].variation();
    s.branch_variations.push_back(v);
    if (v - kTwoPi < worst) {
      worst = v - kTwoPi;
      worst_index = static_cast<int>(i);
    }
  }
  s.full_branches = {"superstable: full branches", worst >= 0.0, worst, worst_index,
                     branches[static_cast<std::size_t>(worst_index)].lo,
                     "[0, 2pi] contained in h(J_i) for every branch"};
  return s;
}

}  // namespace bykov
