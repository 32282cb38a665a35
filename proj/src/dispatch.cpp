// SPDX-License-Identifier: Apache-2.0
#include "hetcache/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hetcache/link_solvers.hpp"
#include "hetcache/mimo_bc.hpp"

namespace hetcache {

std::string_view to_string(Mode m) { return m == Mode::CA ? "CA" : "NCA"; }

Mode parse_mode(std::string_view s) {
  if (s == "CA" || s == "ca") return Mode::CA;
  if (s == "NCA" || s == "nca") return Mode::NCA;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

HkGranularity SolverConfig::granularity(double R_i, double R_j, const ChannelState& ch) const {
  HkGranularity g;
  g.dP_max = hk_dP_max;
  g.dP_min = hk_dP_min;
  g.dLam_max = hk_dLam_max;
  g.dLam_min = hk_dLam_min;
  const double c_perp = cost_decoupled(R_i, R_j, ch);
  const LinkCost gin = cost_gin(R_i, R_j, ch);
  const double upper = gin.feasible ? std::max(gin.total_power, 2.0 * c_perp) : 2.0 * c_perp;
  g.dPtot_max = hk_dptot_max_rel * upper;
  g.dPtot_min = hk_dptot_min_rel * c_perp;
  return g;
}

Route select_route_ca(const CacheAllocation& alloc, Demand d) {
  const std::size_t i = d.i, j = d.j;
  if (i == j) {
    const bool b1 = alloc.has(1, i), b2 = alloc.has(2, i);
    if (b1 && b2) return {Strategy::GIc, 0, 0, false};
    if (b1) return {Strategy::MC_SBS, 1, 0, false};
    if (b2) return {Strategy::MC_SBS, 2, 0, false};
    return {Strategy::MC_MBS, 0, 0, false};
  }
  const bool xi1 = alloc.has(1, i), xi2 = alloc.has(2, i);
  const bool xj1 = alloc.has(1, j), xj2 = alloc.has(2, j);
  const int n = xi1 + xi2 + xj1 + xj2;
  switch (n) {
    case 0:
      return {Strategy::BC_MBS, 0, 0, false};
    case 4:
      return {Strategy::MIMO, 0, 0, false};
    case 3:
      return {Strategy::GIc, 0, (xi1 && xi2) ? 1 : 2, false};
    case 1:
      if (xi1) return {Strategy::ORTH, 1, 1, false};
      if (xi2) return {Strategy::ORTH, 2, 1, false};
      if (xj1) return {Strategy::ORTH, 1, 2, false};
      return {Strategy::ORTH, 2, 2, false};
    default:
      break;
  }
  if (xi1 && xj1) return {Strategy::BC_SBS, 1, 0, false};
  if (xi2 && xj2) return {Strategy::BC_SBS, 2, 0, false};
  if (xi1 && xi2) return {Strategy::MISO, 0, 1, false};
  if (xj1 && xj2) return {Strategy::MISO, 0, 2, false};
  if (xi1 && xj2) return {Strategy::GIwc, 0, 0, false};
  if (xi2 && xj1) return {Strategy::GIwc, 0, 0, true};
  throw std::logic_error("placement pattern not covered by any cooperative strategy");
}

Route select_route_nc(const CacheAllocation& alloc, Demand d, const ChannelState& ch,
                      const FileCatalog& catalog) {
  const bool a = alloc.has(1, d.i), b = alloc.has(2, d.j);
  const Route mbs{d.i == d.j ? Strategy::MC_MBS : Strategy::BC_MBS, 0, 0, false};
  if (a && b) {
    if (gin_alpha(catalog.rate(d.i), catalog.rate(d.j), ch) > 0.0)
      return {Strategy::GIN, 0, 0, false};
    // Interference too strong: the MBS takes over one or both users.
    Route best = mbs;
    double best_cost = route_cost(mbs, d, catalog, ch, {}).total_power;
    for (const Route r : {Route{Strategy::ORTH, 1, 1, false}, Route{Strategy::ORTH, 2, 2, false}}) {
      const double c = route_cost(r, d, catalog, ch, {}).total_power;
      if (c < best_cost) {
        best = r;
        best_cost = c;
      }
    }
    return best;
  }
  if (a) return {Strategy::ORTH, 1, 1, false};
  if (b) return {Strategy::ORTH, 2, 2, false};
  return mbs;
}

std::vector<Route> nc_candidate_routes(const CacheAllocation& alloc, Demand d) {
  std::vector<Route> out;
  const bool a = alloc.has(1, d.i), b = alloc.has(2, d.j);
  if (a && b) out.push_back({Strategy::GIN, 0, 0, false});
  if (a) out.push_back({Strategy::ORTH, 1, 1, false});
  if (b) out.push_back({Strategy::ORTH, 2, 2, false});
  out.push_back({d.i == d.j ? Strategy::MC_MBS : Strategy::BC_MBS, 0, 0, false});
  return out;
}

std::vector<Route> ca_candidate_routes(const CacheAllocation& alloc, Demand d) {
  std::vector<Route> out;
  const std::size_t i = d.i, j = d.j;
  if (i == j) {
    const bool b1 = alloc.has(1, i), b2 = alloc.has(2, i);
    if (b1 && b2) out.push_back({Strategy::GIc, 0, 0, false});
    if (b1) out.push_back({Strategy::MC_SBS, 1, 0, false});
    if (b2) out.push_back({Strategy::MC_SBS, 2, 0, false});
    out.push_back({Strategy::MC_MBS, 0, 0, false});
    return out;
  }
  const bool x[3][3] = {{false, false, false},
                        {false, alloc.has(1, i), alloc.has(2, i)},
                        {false, alloc.has(1, j), alloc.has(2, j)}};  // x[user][sbs]
  const Route primary = select_route_ca(alloc, d);
  out.push_back(primary);
  auto add = [&](Route r) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  };
  if (x[1][1] && x[1][2] && x[2][1] && x[2][2]) add({Strategy::MIMO, 0, 0, false});
  if (x[1][1] && x[2][2]) add({Strategy::GIwc, 0, 0, false});
  if (x[1][2] && x[2][1]) add({Strategy::GIwc, 0, 0, true});
  for (int n = 1; n <= 2; ++n)
    if (x[1][n] && x[2][n]) add({Strategy::BC_SBS, n, 0, false});
  for (int u = 1; u <= 2; ++u)
    if (x[u][1] && x[u][2]) add({Strategy::MISO, 0, u, false});
  for (int u = 1; u <= 2; ++u)
    for (int n = 1; n <= 2; ++n)
      if (x[u][n]) add({Strategy::ORTH, n, u, false});
  add({Strategy::BC_MBS, 0, 0, false});
  return out;
}

namespace {

LinkCost on_sbs(LinkCost c, int sbs) {
  if (sbs == 2) std::swap(c.p_tx1, c.p_tx2);
  return c;
}

LinkCost crossed_hk(double R_i, double R_j, const ChannelState& ch, const SolverConfig& cfg) {
  // Relabel so that transmitter 1 is SBS2 (serving user 1).
  ChannelState x = ch;
  x.a11 = ch.a12;
  x.a12 = ch.a11;
  x.a21 = ch.a22;
  x.a22 = ch.a21;
  if (!(x.a11 > 0.0) && R_i > 0.0) return LinkCost::infeasible(Strategy::GIwc);
  if (!(x.a22 > 0.0) && R_j > 0.0) return LinkCost::infeasible(Strategy::GIwc);
  if (!(x.a11 > 0.0) || !(x.a22 > 0.0)) {
    // One rate is zero: the remaining user is a point-to-point link.
    const double p1 = R_i > 0.0 ? required_snr(R_i) / x.a11 : 0.0;
    const double p2 = R_j > 0.0 ? required_snr(R_j) / x.a22 : 0.0;
    return LinkCost::make(Strategy::GIwc, p2, p1, 0.0);
  }
  HkOptions opt;
  opt.variant = cfg.hk_variant;
  LinkCost c = cost_hk(R_i, R_j, x, cfg.granularity(R_i, R_j, x), opt);
  std::swap(c.p_tx1, c.p_tx2);
  return c;
}

}  // namespace

LinkCost route_cost(const Route& r, Demand d, const FileCatalog& catalog,
                    const ChannelState& ch, const SolverConfig& cfg) {
  const double Ri = catalog.rate(d.i), Rj = catalog.rate(d.j);
  auto rate_of = [&](int user) { return user == 1 ? Ri : Rj; };
  switch (r.strategy) {
    case Strategy::MC_MBS:
      return cost_multicast(Ri, ch.a_minus0(), Strategy::MC_MBS);
    case Strategy::MC_SBS:
      return on_sbs(cost_multicast(Ri, std::min(ch.gain(1, r.sbs), ch.gain(2, r.sbs)),
                                   Strategy::MC_SBS),
                    r.sbs);
    case Strategy::BC_MBS: {
      const GainOrder o = order_by_gain(Ri, ch.a10, Rj, ch.a20);
      return cost_broadcast(o.R_plus, o.R_minus, o.a_plus, o.a_minus, Strategy::BC_MBS);
    }
    case Strategy::BC_SBS: {
      const GainOrder o = order_by_gain(Ri, ch.gain(1, r.sbs), Rj, ch.gain(2, r.sbs));
      return on_sbs(cost_broadcast(o.R_plus, o.R_minus, o.a_plus, o.a_minus, Strategy::BC_SBS),
                    r.sbs);
    }
    case Strategy::ORTH: {
      const int other = 3 - r.user;
      return on_sbs(cost_orthogonal(rate_of(r.user), ch.gain(r.user, r.sbs), rate_of(other),
                                    ch.mbs_gain(other)),
                    r.sbs);
    }
    case Strategy::MISO: {
      const int other = 3 - r.user;
      return cost_miso(rate_of(r.user), ch.gain(r.user, 1), ch.gain(r.user, 2), rate_of(other),
                       ch.mbs_gain(other));
    }
    case Strategy::GIN:
      return cost_gin(Ri, Rj, ch);
    case Strategy::GIwc: {
      if (r.crossed) return crossed_hk(Ri, Rj, ch, cfg);
      HkOptions opt;
      opt.variant = cfg.hk_variant;
      return cost_hk(Ri, Rj, ch, cfg.granularity(Ri, Rj, ch), opt);
    }
    case Strategy::GIc:
      return cost_gic(d.i == d.j ? Ri : rate_of(r.user), ch);
    case Strategy::MIMO: {
      const double eps = cfg.mimo_eps_rel * std::min({ch.a11, ch.a12, ch.a21, ch.a22});
      return to_link_cost(cost_mimo_bc(Ri, Rj, ch, eps));
    }
  }
  throw std::logic_error("unhandled strategy");
}

RequestCostCache::RequestCostCache(const FileCatalog& catalog, const ChannelState& ch,
                                   SolverConfig cfg)
    : catalog_(&catalog), ch_(ch), cfg_(cfg) {
  validate(ch_);
}

const LinkCost& RequestCostCache::get(const Route& r, Demand d) {
  const std::uint64_t tag = static_cast<std::uint64_t>(r.strategy) |
                            (static_cast<std::uint64_t>(r.sbs) << 4) |
                            (static_cast<std::uint64_t>(r.user) << 6) |
                            (static_cast<std::uint64_t>(r.crossed) << 8);
  const std::uint64_t key = (static_cast<std::uint64_t>(d.i) << 36) |
                            (static_cast<std::uint64_t>(d.j) << 9) | tag;
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  ++solves_;
  return memo_.emplace(key, route_cost(r, d, *catalog_, ch_, cfg_)).first->second;
}

namespace {

bool fits(const LinkCost& c, double p_max) {
  return c.feasible && c.p_tx1 <= p_max && c.p_tx2 <= p_max;
}

}  // namespace

LinkCost request_cost(Mode mode, const CacheAllocation& alloc, Demand d,
                      RequestCostCache& cache, double p_max, int* fallback) {
  const Route primary = mode == Mode::CA
                            ? select_route_ca(alloc, d)
                            : select_route_nc(alloc, d, cache.channel(), cache.catalog());
  const LinkCost& c = cache.get(primary, d);
  if (fallback) *fallback = 0;
  if (fits(c, p_max)) return c;
  if (fallback) *fallback = c.feasible ? 2 : 1;

  const LinkCost* best = nullptr;
  const auto routes =
      mode == Mode::CA ? ca_candidate_routes(alloc, d) : nc_candidate_routes(alloc, d);
  for (const Route& r : routes) {
    const LinkCost& cand = cache.get(r, d);
    if (!fits(cand, p_max)) continue;
    if (best == nullptr || cand.total_power < best->total_power) best = &cand;
  }
  if (best == nullptr) throw std::logic_error("no route fits, MBS route missing");
  return *best;
}

LinkCost request_cost(Mode mode, const CacheAllocation& alloc, Demand d,
                      const FileCatalog& catalog, const ChannelState& ch,
                      const SolverConfig& cfg) {
  RequestCostCache cache(catalog, ch, cfg);
  return request_cost(mode, alloc, d, cache);
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (!std::isfinite(t)) {
    sum_ = t;
    return;
  }
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

ExpectedCost expected_cost(Mode mode, const CacheAllocation& alloc, RequestCostCache& cache,
                           double p_max) {
  const FileCatalog& cat = cache.catalog();
  const std::size_t N = cat.size();
  if (alloc.num_files() != N) throw std::invalid_argument("allocation size differs from catalog");
  CompensatedSum q, mbs, fb, outage;
  std::array<CompensatedSum, kNumStrategies> mass;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double w = cat.popularity(i) * cat.popularity(j);
      if (w == 0.0) continue;
      int why = 0;
      const LinkCost c = request_cost(mode, alloc, {i, j}, cache, p_max, &why);
      q.add(w * c.total_power);
      if (c.mbs_used) mbs.add(w);
      if (why != 0) fb.add(w);
      if (why == 2) outage.add(w);
      mass[static_cast<int>(c.strategy)].add(w);
    }
  }
  ExpectedCost e;
  e.q_value = q.value();
  e.mbs_usage_prob = mbs.value();
  e.fallback_prob = fb.value();
  e.outage_prob = outage.value();
  for (int k = 0; k < kNumStrategies; ++k) e.strategy_mass[k] = mass[k].value();
  return e;
}

ExpectedCost expected_cost(Mode mode, const CacheAllocation& alloc, const FileCatalog& catalog,
                           const ChannelState& ch, const SolverConfig& cfg) {
  RequestCostCache cache(catalog, ch, cfg);
  return expected_cost(mode, alloc, cache);
}

}  // namespace hetcache
