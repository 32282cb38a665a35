// SPDX-License-Identifier: Apache-2.0
// Common-message interference channel. In standard form the users need
//   sqrt(P1) + sqrt(c12 P2) >= s   and   sqrt(P2) + sqrt(c21 P1) >= s
// with s = sqrt(2^{2R} - 1); the objective is P1/a11 + P2/a22. The feasible
// set is convex, so the cheapest feasible KKT point or corner is optimal.
#include <algorithm>
#include <cmath>
#include <limits>

#include "hetcache/link_solvers.hpp"

namespace hetcache {

namespace {

constexpr double kFeasTol = 1e-9;

struct Lambdas {
  double l1, l2;
};

}  // namespace

std::vector<GicCandidate> gic_candidates(double R, const ChannelState& ch) {
  std::vector<GicCandidate> out;
  const double snr = required_snr(R);
  const double s = std::sqrt(snr);
  const double a11 = ch.a11, a22 = ch.a22;
  const double c12 = ch.c12(), c21 = ch.c21();
  const double r12 = std::sqrt(c12), r21 = std::sqrt(c21);

  const double A = a11 + a22 * c12;
  const double B = a11 * r21 + a22 * r12;
  const double D = a22 + a11 * c21;

  auto feasible = [&](double P1, double P2) {
    const double tol = kFeasTol * std::max(1.0, s);
    return std::sqrt(P1) + std::sqrt(c12 * P2) >= s - tol &&
           std::sqrt(P2) + std::sqrt(c21 * P1) >= s - tol;
  };
  auto push = [&](GicCandidate::Kind kind, Lambdas l, bool valid) {
    const double P1 = 0.25 * std::pow(a11 * (l.l1 + l.l2 * r21), 2);
    const double P2 = 0.25 * std::pow(a22 * (l.l1 * r12 + l.l2), 2);
    const bool ok = valid && l.l1 >= 0.0 && l.l2 >= 0.0 && feasible(P1, P2);
    out.push_back({kind, P1, P2, l.l1, l.l2, ok, P1 / a11 + P2 / a22});
  };

  // Both rate constraints active: [A B; B D] lambda = [2s; 2s].
  const double det = A * D - B * B;
  if (std::abs(det) > 1e-14 * std::max(A * D, B * B)) {
    push(GicCandidate::Kind::S1, {2.0 * s * (D - B) / det, 2.0 * s * (A - B) / det}, true);
  } else {
    push(GicCandidate::Kind::S1, {0.0, 0.0}, false);
  }
  push(GicCandidate::Kind::S2, {2.0 * s / A, 0.0}, true);
  push(GicCandidate::Kind::S3, {0.0, 2.0 * s / D}, true);

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (c12 > 0.0) {
    const double P2 = std::max(snr, snr / c12);
    out.push_back({GicCandidate::Kind::CornerA, 0.0, P2, nan, nan, feasible(0.0, P2), P2 / a22});
  }
  if (c21 > 0.0) {
    const double P1 = std::max(snr, snr / c21);
    out.push_back({GicCandidate::Kind::CornerB, P1, 0.0, nan, nan, feasible(P1, 0.0), P1 / a11});
  }
  return out;
}

LinkCost cost_gic(double R, const ChannelState& ch) {
  if (R == 0.0) return LinkCost::make(Strategy::GIc, 0.0, 0.0, 0.0);
  const GicCandidate* best = nullptr;
  const auto cands = gic_candidates(R, ch);
  for (const auto& c : cands) {
    if (!c.feasible) continue;
    if (best == nullptr || c.physical_cost < best->physical_cost) best = &c;
  }
  if (best == nullptr) return LinkCost::infeasible(Strategy::GIc);
  return LinkCost::make(Strategy::GIc, best->P1 / ch.a11, best->P2 / ch.a22, 0.0);
}

}  // namespace hetcache
