// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "hetcache/core_model.hpp"

namespace hetcache {

/// Granularity of the sum-power search. dPtot_* are absolute steps in
/// physical watts; dP_* and dLam_* are fractions in (0,1).
struct HkGranularity {
  double dPtot_max = 0.0;
  double dPtot_min = 0.0;
  double dP_max = 0.25;
  double dP_min = 1.0 / 64;
  double dLam_max = 0.25;
  double dLam_min = 1.0 / 64;

  void validate() const;
};

/// Defaults scaled to the instance: dPtot_max = max(c_gin, 2 c_perp)/8 and
/// dPtot_min = 1e-3 c_perp, where c_perp is the interference-free cost.
/// `fractions` supplies dP_* and dLam_*; its dPtot fields are ignored.
HkGranularity hk_default_granularity(double R_i, double R_j, const ChannelState& ch,
                                     const HkGranularity& fractions = {});

/// Standard-form operating point. lam_n is the fraction of P_n spent on
/// the private message.
struct HkPoint {
  double P1;
  double P2;
  double lam1;
  double lam2;
};

/// kSymmetric conditions sigma*_2 and the third/fourth rho20 terms on w2,
/// mirroring sigma*_1 and rho10. kLiteral keeps the self-conditioned
/// terms exactly as typeset, which makes them vanish.
enum class HkVariant { kSymmetric, kLiteral };

struct HkTerms {
  double I_Y1_u1_w1w2, I_Y2_u2_w1w2;
  double I_Y1_w1_w2, I_Y1_w2_w1, I_Y1_w1w2;
  double I_Y2_w2_w1, I_Y2_w1_w2, I_Y2_w1w2;
  double I_Y1_w1, I_Y2_w2;
  double I_Y1_w2_u1w1, I_Y2_w1_u2w2;
  double sigma1, sigma2, sigma12;
  double rho1, rho2, rho12, rho10, rho20;
};

HkTerms hk_terms(const HkPoint& pt, double c12, double c21,
                 HkVariant variant = HkVariant::kSymmetric);

bool hk_achievable(double R_i, double R_j, const HkPoint& pt, double c12, double c21,
                   HkVariant variant = HkVariant::kSymmetric);

struct HkStats {
  std::uint64_t points_checked = 0;  // grid points visited, including pruned ones
  std::uint64_t full_evaluations = 0;
  int ptot_levels = 0;               // distinct sum powers examined
  bool used_gin_incumbent = false;
};

struct HkOptions {
  HkVariant variant = HkVariant::kSymmetric;
  bool use_gin_incumbent = true;
};

/// Coarse-to-fine search for the smallest physical sum power at which some
/// power split and rate split reaches (R_i, R_j). SBS1 serves user 1 and
/// SBS2 serves user 2. The returned point is on the search lattice unless
/// the GIN solution was never beaten.
LinkCost cost_hk(double R_i, double R_j, const ChannelState& ch, const HkGranularity& g,
                 const HkOptions& opt = {}, HkStats* stats = nullptr);

LinkCost cost_hk(double R_i, double R_j, const ChannelState& ch);

}  // namespace hetcache
