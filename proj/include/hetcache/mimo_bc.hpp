// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include <Eigen/Core>

#include "hetcache/core_model.hpp"

namespace hetcache {

/// Result of the two-antenna broadcast (both SBSs hold both files) solved
/// through its dual multiple-access problem.
///
/// `order` names the user whose broadcast signal is encoded first and
/// therefore sees the other user's signal as noise: order 1 is pi_1 = {2,1}
/// (user 2 encoded first), order 2 is pi_2 = {1,2}.
struct MimoSolveReport {
  double sum_power = 0.0;
  std::array<double, 2> mac_trace{};  // dual uplink covariance traces per user
  std::array<double, 2> bc_trace{};   // downlink covariance traces per user
  std::array<double, 2> order_power{};  // sum power of each encoding order
  int order = 1;
  int iterations = 0;
  bool converged = true;
  Eigen::Matrix2d bc_cov_user1 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d bc_cov_user2 = Eigen::Matrix2d::Zero();
  double p_tx1 = 0.0;  // diagonal of the summed downlink covariance
  double p_tx2 = 0.0;
};

/// Virtual-antenna offset 1e-3 * min(a11, a12, a21, a22).
double default_mimo_eps(const ChannelState& ch);

MimoSolveReport cost_mimo_bc(double R_i, double R_j, const ChannelState& ch, double eps);
MimoSolveReport cost_mimo_bc(double R_i, double R_j, const ChannelState& ch);

LinkCost to_link_cost(const MimoSolveReport& r);

/// Augmented receive matrix of user k (rows are receive antennas, columns
/// are SBS1, SBS2): [[sqrt(a_k1), sqrt(a_k2)], [eps, eps]].
Eigen::Matrix2d mimo_user_channel(const ChannelState& ch, int user, double eps);

/// Downlink rate 0.5 log2 det(...) of `user` under DPC with the other
/// user's covariance treated as noise when `interfered` is set.
double bc_rate(const Eigen::Matrix2d& H, const Eigen::Matrix2d& own,
               const Eigen::Matrix2d& other, bool interfered);

}  // namespace hetcache
