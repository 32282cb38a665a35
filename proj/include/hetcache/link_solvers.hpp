// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hetcache/core_model.hpp"

namespace hetcache {

/// One transmitter multicasting a file to both users; a_minus is the weaker
/// of the two gains. Used for both the MBS and an SBS.
LinkCost cost_multicast(double R, double a_minus, Strategy tag = Strategy::MC_MBS);

/// Degraded broadcast with superposition coding. Arguments must come from
/// order_by_gain. The whole power is booked on the MBS for BC_MBS and on
/// p_tx1 otherwise; dispatch moves it when SBS2 is the sender.
LinkCost cost_broadcast(double R_plus, double R_minus, double a_plus, double a_minus,
                        Strategy tag = Strategy::BC_MBS);

/// One SBS serves one user, the MBS serves the other on an orthogonal
/// channel. p_tx1 carries the SBS power; dispatch moves it to p_tx2 when
/// SBS2 is the sender.
LinkCost cost_orthogonal(double R_sbs, double a_sbs, double R_mbs, double a_mbs);

/// Both SBSs beamform one file to a user; the MBS serves the other user.
/// The SBS power is split in proportion to each link's gain (maximum-ratio
/// transmission). The first overload books the whole SBS power on p_tx1.
LinkCost cost_miso(double R_coop, double a_sum, double R_mbs, double a_mbs);
LinkCost cost_miso(double R_coop, double a_first, double a_second, double R_mbs,
                   double a_mbs);

/// Discriminant of the interference-as-noise channel; positive iff the two
/// SINR constraints admit finite powers.
double gin_alpha(double R_i, double R_j, const ChannelState& ch);

LinkCost cost_gin(double R_i, double R_j, const ChannelState& ch);

/// Interference-free lower bound (2^{2Ri}-1)/a11 + (2^{2Rj}-1)/a22.
double cost_decoupled(double R_i, double R_j, const ChannelState& ch);

struct GicCandidate {
  enum class Kind { S1, S2, S3, CornerA, CornerB } kind;
  double P1;  // standard-form power of SBS1
  double P2;  // standard-form power of SBS2
  double lambda1;
  double lambda2;
  bool feasible;
  double physical_cost;
};

/// KKT stationary points and the two non-differentiable corners of the
/// common-message problem, each tagged with its feasibility.
std::vector<GicCandidate> gic_candidates(double R, const ChannelState& ch);

/// Both SBSs send the same file coherently to both users.
LinkCost cost_gic(double R, const ChannelState& ch);

}  // namespace hetcache
