// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "hetcache/dispatch.hpp"
#include "hetcache/han_kobayashi.hpp"
#include "hetcache/link_solvers.hpp"
#include "oracles.hpp"

using namespace hetcache;

TEST_CASE("zero rates are always achievable") {
  CHECK(hk_achievable(0.0, 0.0, {0.0, 0.0, 0.5, 0.5}, 0.7, 0.2));
  CHECK(cost_hk(0.0, 0.0, ChannelState{}).total_power == 0.0);
}

TEST_CASE("decoupled boundary") {
  const double s = required_snr(1.0);
  CHECK(hk_achievable(1.0, 1.0, {s, s, 1.0, 1.0}, 0.0, 0.0));
  CHECK_FALSE(hk_achievable(1.0, 1.0, {s * 0.99, s, 1.0, 1.0}, 0.0, 0.0));
  CHECK_FALSE(hk_achievable(1.0, 1.0, {s, s * 0.99, 1.0, 1.0}, 0.0, 0.0));
}

TEST_CASE("region terms match an independent evaluation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> P(0.0, 20.0), lam(0.0, 1.0), c(0.0, 2.0), R(0.0, 1.5);
  int agree_sym = 0, agree_lit = 0;
  for (int k = 0; k < 10000; ++k) {
    const double P1 = P(rng), P2 = P(rng), l1 = lam(rng), l2 = lam(rng);
    const double c12 = c(rng), c21 = c(rng), Ri = R(rng), Rj = R(rng);
    for (const bool sym : {true, false}) {
      const auto v = sym ? HkVariant::kSymmetric : HkVariant::kLiteral;
      const auto t = hk_terms({P1, P2, l1, l2}, c12, c21, v);
      const auto o = oracle::hk_region(P1, P2, l1, l2, c12, c21, sym);
      REQUIRE(t.rho1 == doctest::Approx(o.rho1).epsilon(1e-12));
      REQUIRE(t.rho2 == doctest::Approx(o.rho2).epsilon(1e-12));
      REQUIRE(t.rho12 == doctest::Approx(o.rho12).epsilon(1e-12));
      REQUIRE(t.rho10 == doctest::Approx(o.rho10).epsilon(1e-12));
      REQUIRE(t.rho20 == doctest::Approx(o.rho20).epsilon(1e-12));
      const bool same = hk_achievable(Ri, Rj, {P1, P2, l1, l2}, c12, c21, v) ==
                        oracle::hk_ok(Ri, Rj, o);
      (sym ? agree_sym : agree_lit) += same;
    }
  }
  CHECK(agree_sym == 10000);
  CHECK(agree_lit == 10000);
}

TEST_CASE("symmetric variant treats the two users alike") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> P(0.0, 10.0), lam(0.0, 1.0), c(0.0, 1.5);
  for (int k = 0; k < 1000; ++k) {
    const double P1 = P(rng), P2 = P(rng), l1 = lam(rng), l2 = lam(rng), c12 = c(rng),
                 c21 = c(rng);
    const auto a = hk_terms({P1, P2, l1, l2}, c12, c21);
    const auto b = hk_terms({P2, P1, l2, l1}, c21, c12);
    REQUIRE(a.rho1 == doctest::Approx(b.rho2).epsilon(1e-12));
    REQUIRE(a.rho12 == doctest::Approx(b.rho12).epsilon(1e-12));
    REQUIRE(a.rho10 == doctest::Approx(b.rho20).epsilon(1e-12));
  }
}

TEST_CASE("decoupled search reaches the interference-free cost") {
  const ChannelState ch{1, 0, 0, 1, 0.01, 0.01};
  const auto g = hk_default_granularity(1.0, 1.0, ch);
  const auto c = cost_hk(1.0, 1.0, ch, g);
  CHECK(c.total_power >= 6.0 - 1e-9);
  CHECK(c.total_power <= 6.0 + g.dPtot_min);
  CHECK(c.strategy == Strategy::GIwc);
}

TEST_CASE("search stays between the decoupled and GIN costs") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> lg(std::log(0.01), std::log(2.0)), ur(0.1, 1.5);
  int checked = 0;
  while (checked < 200) {
    const ChannelState ch{std::exp(lg(rng)), std::exp(lg(rng)), std::exp(lg(rng)),
                          std::exp(lg(rng)), 0.01, 0.01};
    const double Ri = ur(rng), Rj = ur(rng);
    const auto gin = cost_gin(Ri, Rj, ch);
    if (!gin.feasible) continue;
    ++checked;
    const auto hk = cost_hk(Ri, Rj, ch);
    REQUIRE(hk.total_power >= cost_decoupled(Ri, Rj, ch) * (1 - 1e-12));
    REQUIRE(hk.total_power <= gin.total_power * (1 + 1e-12));
  }
}

TEST_CASE("coarse search matches the exhaustive lattice scan") {
  // Moderate interference: the GIN point is optimal and lies on the lattice.
  for (const auto& [R, c] : {std::pair{0.8, 0.3}, std::pair{0.5, 0.8}}) {
    const ChannelState ch{1, c, c, 1, 0.01, 0.01};
    HkGranularity g = hk_default_granularity(R, R, ch);
    g.dP_min = g.dLam_min = 1.0 / 16;
    g.dPtot_min = 1e-2 * cost_decoupled(R, R, ch);
    HkStats st;
    const double hk = cost_hk(R, R, ch, g, {}, &st).total_power;
    const auto ex = oracle::hk_exhaustive(R, R, ch, g.dPtot_min, 16, hk + 1.0);
    CAPTURE(c);
    CHECK(std::abs(hk - ex.total) <= g.dPtot_min);
    CHECK(ex.points >= 10 * st.points_checked);
  }
}

TEST_CASE("literal variant is never larger than symmetric on rho2") {
  // The self-conditioned terms vanish in the literal reading.
  const auto lit = hk_terms({3, 4, 0.5, 0.5}, 0.4, 0.6, HkVariant::kLiteral);
  const auto sym = hk_terms({3, 4, 0.5, 0.5}, 0.4, 0.6, HkVariant::kSymmetric);
  CHECK(lit.sigma2 == 0.0);
  CHECK(lit.rho2 <= sym.rho2);
}
