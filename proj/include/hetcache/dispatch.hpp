// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hetcache/core_model.hpp"
#include "hetcache/han_kobayashi.hpp"

namespace hetcache {

enum class Mode { CA, NCA };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);

/// Knobs forwarded to the link solvers. HK sum-power steps are relative:
/// dPtot_max = hk_dptot_max_rel * max(c_gin, 2 c_perp) and
/// dPtot_min = hk_dptot_min_rel * c_perp for each instance.
struct SolverConfig {
  double hk_dP_max = 0.25;
  double hk_dP_min = 1.0 / 64;
  double hk_dLam_max = 0.25;
  double hk_dLam_min = 1.0 / 64;
  double hk_dptot_max_rel = 1.0 / 8;
  double hk_dptot_min_rel = 1e-3;
  HkVariant hk_variant = HkVariant::kSymmetric;
  double mimo_eps_rel = 1e-3;

  HkGranularity granularity(double R_i, double R_j, const ChannelState& ch) const;
};

/// A strategy together with the transmitters it uses. `sbs` names the
/// sending SBS for BC_SBS, MC_SBS and ORTH; `user` names the user served by
/// an SBS in ORTH and by both SBSs in MISO; `crossed` marks GIwc with SBS2
/// serving user 1. For the i != j GIc pattern `user` is the user whose file
/// both SBSs hold.
struct Route {
  Strategy strategy = Strategy::BC_MBS;
  int sbs = 0;
  int user = 0;
  bool crossed = false;

  friend bool operator==(const Route&, const Route&) = default;
};

Route select_route_ca(const CacheAllocation& alloc, Demand d);
Route select_route_nc(const CacheAllocation& alloc, Demand d, const ChannelState& ch,
                      const FileCatalog& catalog);

inline Strategy select_strategy_ca(const CacheAllocation& alloc, Demand d) {
  return select_route_ca(alloc, d).strategy;
}
inline Strategy select_strategy_nc(const CacheAllocation& alloc, Demand d,
                                   const ChannelState& ch, const FileCatalog& catalog) {
  return select_route_nc(alloc, d, ch, catalog).strategy;
}

/// Every cooperative route the placement supports, MBS routes included.
/// Used when the primary route is unavailable (dead link or power cap).
std::vector<Route> ca_candidate_routes(const CacheAllocation& alloc, Demand d);

/// Non-cooperative routes: GIN, each SBS serving its own user next to the
/// MBS, and the MBS alone.
std::vector<Route> nc_candidate_routes(const CacheAllocation& alloc, Demand d);

/// Cost of one route with powers booked on the physical transmitters.
LinkCost route_cost(const Route& r, Demand d, const FileCatalog& catalog,
                    const ChannelState& ch, const SolverConfig& cfg);

/// Memo of route costs for one channel state. Not thread safe.
class RequestCostCache {
 public:
  RequestCostCache(const FileCatalog& catalog, const ChannelState& ch, SolverConfig cfg);

  const LinkCost& get(const Route& r, Demand d);
  const FileCatalog& catalog() const { return *catalog_; }
  const ChannelState& channel() const { return ch_; }
  const SolverConfig& config() const { return cfg_; }
  std::size_t solves() const { return solves_; }

 private:
  const FileCatalog* catalog_;
  ChannelState ch_;
  SolverConfig cfg_;
  std::unordered_map<std::uint64_t, LinkCost> memo_;
  std::size_t solves_ = 0;
};

inline constexpr double kNoPowerCap = std::numeric_limits<double>::infinity();

/// Served cost of one request. The selected route is replaced when it
/// needs a zero-gain link or when an SBS would exceed `p_max`; the cheapest
/// candidate route of the mode that fits is used instead. `fallback` receives 0 (none), 1 (dead link) or 2 (power cap).
LinkCost request_cost(Mode mode, const CacheAllocation& alloc, Demand d,
                      RequestCostCache& cache, double p_max = kNoPowerCap,
                      int* fallback = nullptr);
LinkCost request_cost(Mode mode, const CacheAllocation& alloc, Demand d,
                      const FileCatalog& catalog, const ChannelState& ch,
                      const SolverConfig& cfg = {});

struct ExpectedCost {
  double q_value = 0.0;
  double mbs_usage_prob = 0.0;
  double fallback_prob = 0.0;  // any re-dispatch
  double outage_prob = 0.0;    // re-dispatch caused by the power cap
  std::array<double, kNumStrategies> strategy_mass{};
};

ExpectedCost expected_cost(Mode mode, const CacheAllocation& alloc, RequestCostCache& cache,
                           double p_max = kNoPowerCap);
ExpectedCost expected_cost(Mode mode, const CacheAllocation& alloc, const FileCatalog& catalog,
                           const ChannelState& ch, const SolverConfig& cfg = {});

/// Compensated (Neumaier) accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return std::isfinite(sum_) ? sum_ + comp_ : sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace hetcache
