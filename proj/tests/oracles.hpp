// SPDX-License-Identifier: Apache-2.0
// Brute-force references for the closed-form and searched solvers. Nothing
// here calls into the library except for plain data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "hetcache/core_model.hpp"

namespace oracle {

inline double snr(double R) { return std::exp2(2.0 * R) - 1.0; }
inline double cap(double x) { return 0.5 * std::log2(1.0 + x); }
inline double plus(double x) { return std::max(0.0, x); }
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Minimum of w1*x + w2*y over [L1,U1]x[L2,U2] subject to feasible(x, y),
/// by repeated n x n grids. Each round re-grids a box that must contain
/// the minimizer:
///  - `monotone`: every feasible point dominates the minimizer
///    componentwise, so the box runs from (L1, L2) to the componentwise
///    minimum of the feasible grid points;
///  - otherwise: the bounding box of the feasible grid points whose cost is
///    within two cell-costs of the incumbent, padded by two cells.
/// Returns +inf if no grid point is feasible.
inline double grid_min_2d(const std::function<bool(double, double)>& feasible, double L1,
                          double U1, double L2, double U2, double w1, double w2, bool monotone,
                          int n = 201, int rounds = 60) {
  double lo1 = L1, hi1 = U1, lo2 = L2, hi2 = U2;
  double best = kInf, bx = 0.0, by = 0.0;
  for (int z = 0; z < rounds; ++z) {
    const double h1 = (hi1 - lo1) / (n - 1), h2 = (hi2 - lo2) / (n - 1);
    const double prev = best;
    std::vector<std::pair<double, double>> pts;
    for (int a = 0; a < n; ++a) {
      const double x = lo1 + a * h1;
      for (int b = 0; b < n; ++b) {
        const double y = lo2 + b * h2;
        if (!feasible(x, y)) continue;
        const double c = w1 * x + w2 * y;
        pts.emplace_back(x, y);
        if (c < best) {
          best = c;
          bx = x;
          by = y;
        }
      }
    }
    if (!std::isfinite(best)) return best;
    if (monotone) {
      // The minimizer lies below the componentwise minimum of all feasible points.
      hi1 = bx;
      hi2 = by;
      for (const auto& [x, y] : pts) {
        hi1 = std::min(hi1, x);
        hi2 = std::min(hi2, y);
      }
      hi1 += h1;
      hi2 += h2;
    } else {
      const double slack = 2.0 * (w1 * h1 + w2 * h2);
      double a1 = bx, b1 = bx, a2 = by, b2 = by;
      for (const auto& [x, y] : pts) {
        if (w1 * x + w2 * y > best + slack) continue;
        a1 = std::min(a1, x);
        b1 = std::max(b1, x);
        a2 = std::min(a2, y);
        b2 = std::max(b2, y);
      }
      lo1 = std::max(L1, a1 - 2 * h1);
      hi1 = b1 + 2 * h1;
      lo2 = std::max(L2, a2 - 2 * h2);
      hi2 = b2 + 2 * h2;
    }
    if (z > 3 && prev - best <= 1e-13 * best) break;
  }
  return best;
}

/// Smallest power of two U >= start for which `f(U)` is finite, then f(2U):
/// once any point with coordinates below U is feasible, the optimum's
/// coordinates are below 2U.
inline double with_auto_box(const std::function<double(double)>& f, double start) {
  double U = start;
  for (int k = 0; k < 80 && !std::isfinite(f(U)); ++k) U *= 2.0;
  return f(2.0 * U);
}

/// Interference as noise; physical powers.
inline double gin(double Ri, double Rj, const hetcache::ChannelState& ch, double U) {
  const double si = snr(Ri), sj = snr(Rj);
  return grid_min_2d(
      [&](double p1, double p2) {
        return ch.a11 * p1 >= si * (1.0 + ch.a12 * p2) * (1 - 1e-12) &&
               ch.a22 * p2 >= sj * (1.0 + ch.a21 * p1) * (1 - 1e-12);
      },
      si / ch.a11, U, sj / ch.a22, U, 1.0, 1.0, true, 801);
}

/// Coherent common-message channel in standard form, cost in physical watts.
inline double gic(double R, const hetcache::ChannelState& ch, double U) {
  const double s = snr(R);
  const double c12 = ch.a12 / ch.a22, c21 = ch.a21 / ch.a11;
  return grid_min_2d(
      [&](double t1, double t2) {
        const double y1 = std::sqrt(t1) + std::sqrt(c12 * t2);
        const double y2 = std::sqrt(t2) + std::sqrt(c21 * t1);
        return y1 * y1 >= s * (1 - 1e-12) && y2 * y2 >= s * (1 - 1e-12);
      },
      0.0, U * ch.a11, 0.0, U * ch.a22, 1.0 / ch.a11, 1.0 / ch.a22, false);
}

/// Degraded broadcast: strong user decodes and strips the weak user's layer.
inline double broadcast(double Rp, double Rm, double ap, double am, double U) {
  return grid_min_2d(
      [&](double pp, double pm) {
        return cap(ap * pp) >= Rp - 1e-12 && cap(am * pm / (1.0 + am * pp)) >= Rm - 1e-12;
      },
      snr(Rp) / ap, U, snr(Rm) / am, U, 1.0, 1.0, true);
}

/// Two SBSs beamforming one file to one user; the MBS serves the other.
inline double miso(double Rc, double a1, double a2, double Rm, double am, double U) {
  const double s = snr(Rc);
  const double coop = grid_min_2d(
      [&](double p1, double p2) {
        const double amp = std::sqrt(a1 * p1) + std::sqrt(a2 * p2);
        return amp * amp >= s * (1 - 1e-12);
      },
      0.0, U, 0.0, U, 1.0, 1.0, false);
  return coop + snr(Rm) / am;
}

/// Rate-splitting region conditions, written out term by term. `mirror`
/// conditions the second user's sigma and rho20 terms like the first
/// user's; without it the self-conditioned terms read as zero.
struct HkRegion {
  double rho1, rho2, rho12, rho10, rho20;
};

inline HkRegion hk_region(double P1, double P2, double l1, double l2, double c12, double c21,
                          bool mirror) {
  const double pr1 = l1 * P1, pr2 = l2 * P2;              // private powers
  const double cm1 = (1 - l1) * P1, cm2 = (1 - l2) * P2;  // common powers
  const double d1 = 1 + pr1 + c12 * pr2;
  const double d2 = 1 + pr2 + c21 * pr1;

  const double y1_u1 = cap(pr1 / (1 + c12 * pr2));
  const double y2_u2 = cap(pr2 / (1 + c21 * pr1));
  const double y1_w1_g_w2 = cap(cm1 / d1);
  const double y1_w2_g_w1 = cap(c12 * cm2 / d1);
  const double y1_both = cap((cm1 + c12 * cm2) / d1);
  const double y2_w2_g_w1 = cap(cm2 / d2);
  const double y2_w1_g_w2 = cap(c21 * cm1 / d2);
  const double y2_both = cap((cm2 + c21 * cm1) / d2);
  const double y1_w1 = cap(cm1 / (1 + pr2 + c21 * pr1));
  const double y2_w2 = cap(cm2 / (1 + pr1 + c12 * pr2));
  const double y1_w2_g_u1w1 = cap(c12 * cm2 / (1 + c12 * pr2));
  const double y2_w1_g_u2w2 = cap(c21 * cm1 / (1 + c21 * pr1));

  const double s1 = std::min(y1_w1_g_w2, y2_w1_g_u2w2);
  const double s2 = mirror ? std::min(y2_w2_g_w1, y1_w2_g_u1w1) : 0.0;
  const double s12 = std::min(std::min(y1_both, y2_both),
                              std::min(y1_w1_g_w2 + y2_w2_g_w1, y2_w1_g_w2 + y1_w2_g_w1));

  HkRegion r{};
  r.rho1 = s1 + y1_u1;
  r.rho2 = s2 + y2_u2;
  r.rho12 = s12 + y1_u1 + y2_u2;
  r.rho10 = 2 * s1 + 2 * y1_u1 + y2_u2 - plus(s1 - y2_w1_g_w2) +
            std::min({y2_w2_g_w1, y2_w2 + plus(y2_w1_g_w2 - s1), y1_w2_g_w1, y1_both - s1});
  r.rho20 = 2 * s2 + 2 * y2_u2 + y1_u1 - plus(s2 - y1_w2_g_w1) +
            std::min({y1_w1_g_w2, y1_w1 + plus(y1_w2_g_w1 - s2), mirror ? y2_w1_g_w2 : 0.0,
                      y2_both - (mirror ? s2 : s1)});
  return r;
}

inline bool hk_ok(double Ri, double Rj, const HkRegion& r, double tol = 1e-10) {
  return Ri <= r.rho1 + tol && Rj <= r.rho2 + tol && Ri + Rj <= r.rho12 + tol &&
         2 * Ri + Rj <= r.rho10 + tol && Ri + 2 * Rj <= r.rho20 + tol;
}

struct HkGridResult {
  double total = kInf;  // physical sum power of the first feasible level
  unsigned long long points = 0;
};

/// Every point of the finest lattice at every sum-power level
/// c_perp, c_perp + dPtot, ... until a level admits a feasible point.
inline HkGridResult hk_exhaustive(double Ri, double Rj, const hetcache::ChannelState& ch,
                                  double dPtot, int K, double stop_at) {
  const double c12 = ch.a12 / ch.a22, c21 = ch.a21 / ch.a11;
  const double c_perp = snr(Ri) / ch.a11 + snr(Rj) / ch.a22;
  HkGridResult out;
  for (int lv = 0;; ++lv) {
    const double Pt = c_perp + lv * dPtot;
    if (Pt > stop_at) return out;
    for (int kp = 0; kp <= K; ++kp) {
      const double p = static_cast<double>(kp) / K;
      const double P1 = ch.a11 * p * Pt, P2 = ch.a22 * (1 - p) * Pt;
      for (int a = 0; a <= K; ++a) {
        for (int b = 0; b <= K; ++b) {
          ++out.points;
          if (P1 < snr(Ri) * (1 - 1e-9) || P2 < snr(Rj) * (1 - 1e-9)) continue;  // cannot pass rho1/rho2
          if (hk_ok(Ri, Rj, hk_region(P1, P2, double(a) / K, double(b) / K, c12, c21, true))) {
            out.total = Pt;
            // Count the rest of this level too: an exhaustive pass visits it all.
            out.points += static_cast<unsigned long long>(K + 1) * (K + 1) * (K + 1) -
                          ((static_cast<unsigned long long>(kp) * (K + 1) + a) * (K + 1) + b + 1);
            return out;
          }
        }
      }
    }
  }
}

/// Two single-antenna users, two transmit antennas, real gains. Dirty-paper
/// coding with user `clean` encoded last: its beam direction is free, the
/// other user's beam is matched to its own channel. Scans the clean user's
/// beam angle and refines around the best angle.
inline double mimo_rank1(double Ri, double Rj, const hetcache::ChannelState& ch) {
  const double h[2][2] = {{std::sqrt(ch.a11), std::sqrt(ch.a12)},
                          {std::sqrt(ch.a21), std::sqrt(ch.a22)}};
  const double s[2] = {snr(Ri), snr(Rj)};
  auto dot = [](const double* x, double c, double sn) { return x[0] * c + x[1] * sn; };
  double best = kInf;
  for (int clean = 0; clean < 2; ++clean) {
    const int other = 1 - clean;
    const double norm_o = std::hypot(h[other][0], h[other][1]);
    auto cost = [&](double th) {
      const double gc = dot(h[clean], std::cos(th), std::sin(th));
      if (s[clean] > 0 && std::abs(gc) < 1e-300) return kInf;
      const double pc = s[clean] > 0 ? s[clean] / (gc * gc) : 0.0;
      const double leak = dot(h[other], std::cos(th), std::sin(th));
      const double po = s[other] * (1 + pc * leak * leak) / (norm_o * norm_o);
      return pc + po;
    };
    double lo = 0.0, hi = std::numbers::pi, th_best = 0.0, c_best = kInf;
    for (int round = 0; round < 8; ++round) {
      const int n = 2000;
      for (int k = 0; k <= n; ++k) {
        const double th = lo + (hi - lo) * k / n;
        const double c = cost(th);
        if (c < c_best) {
          c_best = c;
          th_best = th;
        }
      }
      const double w = (hi - lo) / n * 4;
      lo = th_best - w;
      hi = th_best + w;
    }
    best = std::min(best, c_best);
  }
  return best;
}

}  // namespace oracle
