// SPDX-License-Identifier: Apache-2.0
#include "hetcache/han_kobayashi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hetcache/link_solvers.hpp"

namespace hetcache {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRateTol = 1e-10;
// Slack on the necessary single-user conditions so pruning never rejects
// a point the full check would accept.
constexpr double kPruneSlack = 1e-7;

double pos(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

void HkGranularity::validate() const {
  auto pair = [](double lo, double hi, const char* name, bool fraction) {
    if (!(lo > 0.0 && lo <= hi) || !std::isfinite(hi) || (fraction && hi >= 1.0))
      throw std::invalid_argument(std::string("invalid HK granularity pair ") + name);
  };
  pair(dPtot_min, dPtot_max, "dPtot", false);
  pair(dP_min, dP_max, "dP", true);
  pair(dLam_min, dLam_max, "dLam", true);
}

HkGranularity hk_default_granularity(double R_i, double R_j, const ChannelState& ch,
                                     const HkGranularity& fractions) {
  HkGranularity g = fractions;
  const double c_perp = cost_decoupled(R_i, R_j, ch);
  const LinkCost gin = cost_gin(R_i, R_j, ch);
  const double upper = gin.feasible ? std::max(gin.total_power, 2.0 * c_perp) : 2.0 * c_perp;
  g.dPtot_max = upper / 8.0;
  g.dPtot_min = 1e-3 * c_perp;
  return g;
}

HkTerms hk_terms(const HkPoint& pt, double c12, double c21, HkVariant variant) {
  const double P1 = pt.P1, P2 = pt.P2;
  const double l1 = pt.lam1, l2 = pt.lam2;
  const double lb1 = 1.0 - l1, lb2 = 1.0 - l2;
  const double n1 = 1.0 + l1 * P1 + c12 * l2 * P2;
  const double n2 = 1.0 + l2 * P2 + c21 * l1 * P1;

  HkTerms t{};
  t.I_Y1_u1_w1w2 = capacity(l1 * P1 / (1.0 + c12 * l2 * P2));
  t.I_Y2_u2_w1w2 = capacity(l2 * P2 / (1.0 + c21 * l1 * P1));
  t.I_Y1_w1_w2 = capacity(lb1 * P1 / n1);
  t.I_Y1_w2_w1 = capacity(c12 * lb2 * P2 / n1);
  t.I_Y1_w1w2 = capacity((lb1 * P1 + c12 * lb2 * P2) / n1);
  t.I_Y2_w2_w1 = capacity(lb2 * P2 / n2);
  t.I_Y2_w1_w2 = capacity(c21 * lb1 * P1 / n2);
  t.I_Y2_w1w2 = capacity((lb2 * P2 + c21 * lb1 * P1) / n2);
  // These two keep the denominators exactly as published.
  t.I_Y1_w1 = capacity(lb1 * P1 / (1.0 + l2 * P2 + c21 * l1 * P1));
  t.I_Y2_w2 = capacity(lb2 * P2 / (1.0 + l1 * P1 + c12 * l2 * P2));
  t.I_Y1_w2_u1w1 = capacity(c12 * lb2 * P2 / (1.0 + c12 * l2 * P2));
  t.I_Y2_w1_u2w2 = capacity(c21 * lb1 * P1 / (1.0 + c21 * l1 * P1));

  const bool literal = variant == HkVariant::kLiteral;
  t.sigma1 = std::min(t.I_Y1_w1_w2, t.I_Y2_w1_u2w2);
  t.sigma2 = literal ? 0.0 : std::min(t.I_Y2_w2_w1, t.I_Y1_w2_u1w1);
  t.sigma12 = std::min({t.I_Y1_w1w2, t.I_Y2_w1w2, t.I_Y1_w1_w2 + t.I_Y2_w2_w1,
                        t.I_Y2_w1_w2 + t.I_Y1_w2_w1});

  const double I1u = t.I_Y1_u1_w1w2, I2u = t.I_Y2_u2_w1w2;
  t.rho1 = t.sigma1 + I1u;
  t.rho2 = t.sigma2 + I2u;
  t.rho12 = t.sigma12 + I1u + I2u;
  t.rho10 = 2.0 * t.sigma1 + 2.0 * I1u + I2u - pos(t.sigma1 - t.I_Y2_w1_w2) +
            std::min({t.I_Y2_w2_w1, t.I_Y2_w2 + pos(t.I_Y2_w1_w2 - t.sigma1), t.I_Y1_w2_w1,
                      t.I_Y1_w1w2 - t.sigma1});
  const double third = literal ? 0.0 : t.I_Y2_w1_w2;
  const double last = t.I_Y2_w1w2 - (literal ? t.sigma1 : t.sigma2);
  t.rho20 = 2.0 * t.sigma2 + 2.0 * I2u + I1u - pos(t.sigma2 - t.I_Y1_w2_w1) +
            std::min({t.I_Y1_w1_w2, t.I_Y1_w1 + pos(t.I_Y1_w2_w1 - t.sigma2), third, last});
  return t;
}

bool hk_achievable(double R_i, double R_j, const HkPoint& pt, double c12, double c21,
                   HkVariant variant) {
  if (R_i == 0.0 && R_j == 0.0) return true;
  const HkTerms t = hk_terms(pt, c12, c21, variant);
  return R_i <= t.rho1 + kRateTol && R_j <= t.rho2 + kRateTol &&
         R_i + R_j <= t.rho12 + kRateTol && 2.0 * R_i + R_j <= t.rho10 + kRateTol &&
         R_i + 2.0 * R_j <= t.rho20 + kRateTol;
}

namespace {

// Lattice of a coarse-to-fine fraction: values k * finest for k = 0..K,
// visited with strides 2^levels, ..., 2, 1.
struct Lattice {
  int levels = 0;
  double finest = 0.0;
  long K = 0;

  Lattice(double dmax, double dmin) {
    double d = dmax;
    while (d > dmin) {
      d /= 2.0;
      ++levels;
    }
    finest = d;
    K = static_cast<long>(std::floor(1.0 / finest + 1e-9));
  }
  long stride(int level) const { return 1L << (levels - level); }
};

class Searcher {
 public:
  Searcher(double R_i, double R_j, const ChannelState& ch, const HkGranularity& g,
           HkVariant variant, HkStats* stats)
      : Ri_(R_i), Rj_(R_j), si_(required_snr(R_i)), sj_(required_snr(R_j)), a11_(ch.a11),
        a22_(ch.a22), c12_(ch.c12()), c21_(ch.c21()), variant_(variant), stats_(stats),
        P_(g.dP_max, g.dP_min), L_(g.dLam_max, g.dLam_min) {}

  // Runs the full sequence of grids at one sum power; stops at the first
  // achievable point.
  bool check(double Ptot, HkPoint* found, double* split) {
    if (stats_) ++stats_->ptot_levels;
    for (int lp = 0; lp <= P_.levels; ++lp)
      if (grid(Ptot, lp, 0, lp > 0 ? 1 : 0, found, split)) return true;
    for (int ll = 1; ll <= L_.levels; ++ll)
      if (grid(Ptot, P_.levels, ll, 2, found, split)) return true;
    return false;
  }

 private:
  // refine: 0 first grid, 1 previous grid had twice the power stride,
  // 2 previous grid had twice the lambda stride.
  bool grid(double Ptot, int lp, int ll, int refine, HkPoint* found, double* split) {
    const long sp = P_.stride(lp), sl = L_.stride(ll);
    const long nl = L_.K / sl + 1;
    const long nl_prev = L_.K / (2 * sl) + 1;
    const long row_new = refine == 2 ? nl * nl - nl_prev * nl_prev : nl * nl;

    for (long kp = 0; kp <= P_.K; kp += sp) {
      if (refine == 1 && kp % (2 * sp) == 0) continue;  // whole row seen already
      const double p = static_cast<double>(kp) * P_.finest;
      const double P1 = a11_ * p * Ptot;
      const double P2 = a22_ * (1.0 - p) * Ptot;
      if (P1 * (1.0 + kPruneSlack) < si_ || P2 * (1.0 + kPruneSlack) < sj_) {
        count(row_new);
        continue;
      }
      const double lam2_cap = (si_ > 0.0 && c12_ * P2 > 0.0)
                                  ? (P1 * (1.0 + kPruneSlack) / si_ - 1.0) / (c12_ * P2)
                                  : kInf;
      const double lam1_cap = (sj_ > 0.0 && c21_ * P1 > 0.0)
                                  ? (P2 * (1.0 + kPruneSlack) / sj_ - 1.0) / (c21_ * P1)
                                  : kInf;
      for (long k1 = 0; k1 <= L_.K; k1 += sl) {
        const double lam1 = static_cast<double>(k1) * L_.finest;
        const bool k1_old = refine == 2 && k1 % (2 * sl) == 0;
        for (long k2 = 0; k2 <= L_.K; k2 += sl) {
          if (k1_old && k2 % (2 * sl) == 0) continue;
          count(1);
          const double lam2 = static_cast<double>(k2) * L_.finest;
          if (lam1 > lam1_cap || lam2 > lam2_cap) continue;
          if (stats_) ++stats_->full_evaluations;
          const HkPoint pt{P1, P2, lam1, lam2};
          if (hk_achievable(Ri_, Rj_, pt, c12_, c21_, variant_)) {
            *found = pt;
            *split = p;
            return true;
          }
        }
      }
    }
    return false;
  }

  void count(long n) {
    if (stats_) stats_->points_checked += static_cast<std::uint64_t>(n);
  }

  double Ri_, Rj_, si_, sj_, a11_, a22_, c12_, c21_;
  HkVariant variant_;
  HkStats* stats_;
  Lattice P_, L_;
};

}  // namespace

LinkCost cost_hk(double R_i, double R_j, const ChannelState& ch, const HkGranularity& g,
                 const HkOptions& opt, HkStats* stats) {
  if (R_i == 0.0 && R_j == 0.0) return LinkCost::make(Strategy::GIwc, 0.0, 0.0, 0.0);
  g.validate();

  Searcher search(R_i, R_j, ch, g, opt.variant, stats);
  const double c_perp = cost_decoupled(R_i, R_j, ch);

  bool have_best = false;
  double best_total = kInf, best_p1 = 0.0, best_p2 = 0.0;
  auto record = [&](double Ptot, double split) {
    have_best = true;
    best_total = Ptot;
    best_p1 = split * Ptot;
    best_p2 = Ptot - best_p1;
  };

  const LinkCost gin = opt.use_gin_incumbent ? cost_gin(R_i, R_j, ch)
                                             : LinkCost::infeasible(Strategy::GIN);
  HkPoint pt{};
  double split = 0.0;
  double Ptot = 0.0;
  double step = 0.0;  // width of the bracket [last failure, Ptot]

  if (gin.feasible) {
    // Climb on multiples of dPtot_max, starting at the lower bound; the GIN
    // solution caps the climb.
    step = g.dPtot_max;
    double lower = c_perp;
    Ptot = std::max(step, std::ceil(c_perp / step) * step);
    while (true) {
      if (Ptot >= gin.total_power) {
        have_best = true;
        best_total = gin.total_power;
        best_p1 = gin.p_tx1;
        best_p2 = gin.p_tx2;
        if (stats) stats->used_gin_incumbent = true;
        step = gin.total_power - lower;
        Ptot = gin.total_power;
        break;
      }
      if (search.check(Ptot, &pt, &split)) {
        record(Ptot, split);
        step = Ptot - lower;
        break;
      }
      lower = Ptot;
      Ptot += g.dPtot_max;
    }
  } else {
    double lower = c_perp;
    Ptot = 2.0 * c_perp;
    int doublings = 0;
    while (!search.check(Ptot, &pt, &split)) {
      if (++doublings > 200) return LinkCost::infeasible(Strategy::GIwc);
      lower = Ptot;
      Ptot *= 2.0;
    }
    record(Ptot, split);
    step = Ptot - lower;
  }

  bool success = true;
  while (step > g.dPtot_min) {
    step /= 2.0;
    Ptot = success ? Ptot - step : Ptot + step;
    success = search.check(Ptot, &pt, &split);
    if (success && Ptot < best_total) record(Ptot, split);
  }
  return LinkCost::make(Strategy::GIwc, best_p1, best_p2, 0.0);
}

LinkCost cost_hk(double R_i, double R_j, const ChannelState& ch) {
  return cost_hk(R_i, R_j, ch, hk_default_granularity(R_i, R_j, ch));
}

}  // namespace hetcache
