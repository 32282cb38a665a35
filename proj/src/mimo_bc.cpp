// SPDX-License-Identifier: Apache-2.0
// Two-antenna broadcast with dirty paper coding, solved on the dual uplink.
// For a fixed decoding order the uplink user decoded last sees no
// interference, so its minimum-trace covariance is an inverse water-fill
// on its own channel; the other user water-fills on the whitened channel.
// The downlink covariances then follow from the standard MAC-to-BC map.
#include "hetcache/mimo_bc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace hetcache {

namespace {

using Mat = Eigen::Matrix2d;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct WaterFill {
  Mat Q = Mat::Zero();
  double power = 0.0;
};

// Minimum-trace Q with 0.5 log2 det(I + Q G) = R for symmetric PSD G.
WaterFill inverse_water_fill(const Mat& G, double R) {
  WaterFill w;
  if (R == 0.0) return w;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (G + G.transpose()));
  // Eigen sorts ascending; mode 0 is the strongest after the swap.
  const double mu[2] = {std::max(es.eigenvalues()(1), 0.0), std::max(es.eigenvalues()(0), 0.0)};
  const Eigen::Vector2d u[2] = {es.eigenvectors().col(1), es.eigenvectors().col(0)};
  if (!(mu[0] > 0.0)) {
    w.power = kInf;
    return w;
  }
  const double two_r = std::exp2(2.0 * R);
  double nu = two_r / mu[0];
  int active = 1;
  if (mu[1] > 0.0) {
    const double nu2 = std::exp2(R) / std::sqrt(mu[0] * mu[1]);
    if (nu2 * mu[1] >= 1.0) {
      nu = nu2;
      active = 2;
    }
  }
  for (int k = 0; k < active; ++k) {
    const double q = std::max(nu - 1.0 / mu[k], 0.0);
    w.Q += q * u[k] * u[k].transpose();
    w.power += q;
  }
  return w;
}

Mat sym_sqrt(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  return es.operatorSqrt();
}

Mat sym_inv_sqrt(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  return es.operatorInverseSqrt();
}

struct OrderSolution {
  double power = kInf;
  Mat Q_int = Mat::Zero();  // uplink covariance of the downlink-interfered user
  Mat Q_cl = Mat::Zero();
  Mat S_int = Mat::Zero();  // downlink covariances
  Mat S_cl = Mat::Zero();
};

// H_int is the downlink user encoded first (sees the other as noise); it is
// decoded last on the uplink.
OrderSolution solve_order(const Mat& H_int, double R_int, const Mat& H_cl, double R_cl) {
  OrderSolution s;
  const WaterFill wi = inverse_water_fill(H_int * H_int.transpose(), R_int);
  if (!std::isfinite(wi.power)) return s;
  const Mat B = Mat::Identity() + H_int.transpose() * wi.Q * H_int;
  const Mat B_inv_sqrt = sym_inv_sqrt(B);
  const WaterFill wc = inverse_water_fill(H_cl * B.inverse() * H_cl.transpose(), R_cl);
  if (!std::isfinite(wc.power)) return s;
  s.power = wi.power + wc.power;
  s.Q_int = wi.Q;
  s.Q_cl = wc.Q;

  {
    Eigen::JacobiSVD<Mat> svd(B_inv_sqrt * H_cl.transpose(),
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat T = B_inv_sqrt * svd.matrixU() * svd.matrixV().transpose();
    s.S_cl = T * wc.Q * T.transpose();
  }
  {
    const Mat A = Mat::Identity() + H_int * s.S_cl * H_int.transpose();
    const Mat A_sqrt = sym_sqrt(A);
    Eigen::JacobiSVD<Mat> svd(H_int.transpose() * sym_inv_sqrt(A),
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat T = svd.matrixU() * svd.matrixV().transpose() * A_sqrt;
    s.S_int = T * wi.Q * T.transpose();
  }
  return s;
}

}  // namespace

double default_mimo_eps(const ChannelState& ch) {
  return 1e-3 * std::min({ch.a11, ch.a12, ch.a21, ch.a22});
}

Mat mimo_user_channel(const ChannelState& ch, int user, double eps) {
  Mat H;
  H << std::sqrt(ch.gain(user, 1)), std::sqrt(ch.gain(user, 2)), eps, eps;
  return H;
}

double bc_rate(const Mat& H, const Mat& own, const Mat& other, bool interfered) {
  const Mat I = Mat::Identity();
  const Mat noise = interfered ? Mat(I + H * other * H.transpose()) : I;
  const Mat total = noise + H * own * H.transpose();
  return 0.5 * std::log2(total.determinant() / noise.determinant());
}

MimoSolveReport cost_mimo_bc(double R_i, double R_j, const ChannelState& ch, double eps) {
  MimoSolveReport rep;
  const Mat H1 = mimo_user_channel(ch, 1, eps);
  const Mat H2 = mimo_user_channel(ch, 2, eps);

  // Order 1 encodes user 2 first, order 2 encodes user 1 first.
  const OrderSolution o1 = solve_order(H2, R_j, H1, R_i);
  const OrderSolution o2 = solve_order(H1, R_i, H2, R_j);
  rep.order_power = {o1.power, o2.power};
  rep.iterations = 2;

  const bool first = o1.power <= o2.power;
  const OrderSolution& o = first ? o1 : o2;
  rep.order = first ? 1 : 2;
  rep.sum_power = o.power;
  rep.converged = std::isfinite(o.power);
  if (!rep.converged) return rep;

  const Mat& S1 = first ? o.S_cl : o.S_int;
  const Mat& S2 = first ? o.S_int : o.S_cl;
  const Mat& Q1 = first ? o.Q_cl : o.Q_int;
  const Mat& Q2 = first ? o.Q_int : o.Q_cl;
  rep.bc_cov_user1 = S1;
  rep.bc_cov_user2 = S2;
  rep.mac_trace = {Q1.trace(), Q2.trace()};
  rep.bc_trace = {S1.trace(), S2.trace()};
  const Mat S = S1 + S2;
  rep.p_tx1 = std::max(S(0, 0), 0.0);
  rep.p_tx2 = std::max(S(1, 1), 0.0);
  return rep;
}

MimoSolveReport cost_mimo_bc(double R_i, double R_j, const ChannelState& ch) {
  return cost_mimo_bc(R_i, R_j, ch, default_mimo_eps(ch));
}

LinkCost to_link_cost(const MimoSolveReport& r) {
  if (!r.converged) return LinkCost::infeasible(Strategy::MIMO);
  return LinkCost::make(Strategy::MIMO, r.p_tx1, r.p_tx2, 0.0);
}

}  // namespace hetcache
