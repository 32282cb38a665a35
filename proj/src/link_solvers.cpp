// SPDX-License-Identifier: Apache-2.0
#include "hetcache/link_solvers.hpp"

#include <cmath>
#include <limits>

namespace hetcache {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Point-to-point power; a zero rate needs nothing even on a dead link.
double p2p_power(double R, double a) {
  if (R == 0.0) return 0.0;
  if (!(a > 0.0)) return kInf;
  return required_snr(R) / a;
}

bool is_mbs_tag(Strategy s) { return s == Strategy::MC_MBS || s == Strategy::BC_MBS; }

LinkCost single_sender(Strategy tag, double power) {
  if (!std::isfinite(power)) return LinkCost::infeasible(tag);
  return is_mbs_tag(tag) ? LinkCost::make(tag, 0.0, 0.0, power)
                         : LinkCost::make(tag, power, 0.0, 0.0);
}

}  // namespace

LinkCost cost_multicast(double R, double a_minus, Strategy tag) {
  return single_sender(tag, p2p_power(R, a_minus));
}

LinkCost cost_broadcast(double R_plus, double R_minus, double a_plus, double a_minus,
                        Strategy tag) {
  const double p_plus = p2p_power(R_plus, a_plus);
  double p_minus = 0.0;
  if (R_minus > 0.0) {
    if (!(a_minus > 0.0) || !std::isfinite(p_plus)) return LinkCost::infeasible(tag);
    p_minus = required_snr(R_minus) * (1.0 + a_minus * p_plus) / a_minus;
  }
  return single_sender(tag, p_plus + p_minus);
}

LinkCost cost_orthogonal(double R_sbs, double a_sbs, double R_mbs, double a_mbs) {
  const double ps = p2p_power(R_sbs, a_sbs);
  const double pm = p2p_power(R_mbs, a_mbs);
  if (!std::isfinite(ps) || !std::isfinite(pm)) return LinkCost::infeasible(Strategy::ORTH);
  return LinkCost::make(Strategy::ORTH, ps, 0.0, pm);
}

LinkCost cost_miso(double R_coop, double a_sum, double R_mbs, double a_mbs) {
  return cost_miso(R_coop, a_sum, 0.0, R_mbs, a_mbs);
}

LinkCost cost_miso(double R_coop, double a_first, double a_second, double R_mbs,
                   double a_mbs) {
  const double a_sum = a_first + a_second;
  const double pc = p2p_power(R_coop, a_sum);
  const double pm = p2p_power(R_mbs, a_mbs);
  if (!std::isfinite(pc) || !std::isfinite(pm)) return LinkCost::infeasible(Strategy::MISO);
  const double share = pc > 0.0 ? a_first / a_sum : 1.0;
  return LinkCost::make(Strategy::MISO, pc * share, pc - pc * share, pm);
}

double gin_alpha(double R_i, double R_j, const ChannelState& ch) {
  return ch.a22 - ch.a12 * ch.a21 * required_snr(R_i) * required_snr(R_j) / ch.a11;
}

LinkCost cost_gin(double R_i, double R_j, const ChannelState& ch) {
  const double alpha = gin_alpha(R_i, R_j, ch);
  if (!(alpha > 0.0)) return LinkCost::infeasible(Strategy::GIN);
  const double si = required_snr(R_i);
  const double sj = required_snr(R_j);
  const double pj = sj * (ch.a21 * si / ch.a11 + 1.0) / alpha;
  const double pi = si * (ch.a12 * pj + 1.0) / ch.a11;
  return LinkCost::make(Strategy::GIN, pi, pj, 0.0);
}

double cost_decoupled(double R_i, double R_j, const ChannelState& ch) {
  return required_snr(R_i) / ch.a11 + required_snr(R_j) / ch.a22;
}

}  // namespace hetcache
