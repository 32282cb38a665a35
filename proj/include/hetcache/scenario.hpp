// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetcache/allocators.hpp"
#include "hetcache/core_model.hpp"
#include "hetcache/dispatch.hpp"
#include "hetcache/random_stream.hpp"

namespace hetcache {

/// Lognormal shadowing around fixed means. Cross links are drawn through
/// their standard-form ratio: c12 and c21 are lognormal with mean mean_c
/// and a12 = c12 * a22, a21 = c21 * a11.
struct FadingConfig {
  double mean_a11 = 1.0;
  double mean_a22 = 1.0;
  double mean_a10 = 0.01;
  double mean_a20 = 0.01;
  double sigma = 0.5;  // std-dev of the natural log
  double mean_c = 0.0;
  bool fade_sbs = true;   // SBS-user links (direct and cross)
  bool fade_mbs = false;  // MBS-user links

  void validate() const;
  /// True when every draw equals the means.
  bool is_static() const { return sigma == 0.0 || (!fade_sbs && !fade_mbs); }
};

/// Gains equal to the configured means.
ChannelState mean_channel(const FadingConfig& cfg);

/// Six normals are consumed per call in the order a11, a22, c12, c21, a10,
/// a20, whether or not the link is faded.
ChannelState sample_channel(const FadingConfig& cfg, RandomStream& stream);

/// Mean-preserving lognormal: exp(ln m - sigma^2/2 + sigma z); 0 when m = 0.
double lognormal(double mean, double sigma, double z);

struct MaxPowerPolicy {
  bool enabled = false;
  double p_max = kNoPowerCap;  // per-SBS cap in watts
  double outage_target = 1e-5;
  double calibration_mean_c = 0.4;
  double calibration_rate = 0.0;
  double infeasible_rate = 0.0;  // share of calibration draws with alpha <= 0
  std::size_t calibration_samples = 0;
};

/// Per-SBS power needed by the interference-as-noise channel at the
/// catalog's largest rate for both users; +inf when alpha <= 0.
double gin_required_sbs_power(const ChannelState& ch, double rate);

/// (1 - outage_target) quantile of the per-SBS GIN power at the catalog's
/// largest rate and mean_c = 0.4. Infeasible draws count as exceedances;
/// when they alone exceed the target, the quantile is taken among feasible
/// draws instead and infeasible_rate reports their share.
MaxPowerPolicy calibrate_pmax(const FadingConfig& cfg, const FileCatalog& catalog,
                              double outage_target, std::size_t n_samples = 1000000,
                              std::uint64_t seed = 1, double mean_c = 0.4);

/// Share of draws whose required per-SBS GIN power exceeds p_max. With
/// `feasible_only`, draws with alpha <= 0 are left out of both counts.
double measure_exceedance(const FadingConfig& cfg, double rate, double p_max,
                          std::size_t n_samples, std::uint64_t seed, bool feasible_only = false);

struct McEstimate {
  double q_value = 0.0;
  double q_stderr = 0.0;
  double mbs_usage_prob = 0.0;
  double outage_rate = 0.0;
  double fallback_rate = 0.0;
  std::size_t n_samples = 0;
  std::array<double, kNumStrategies> strategy_mass{};
};

struct McOptions {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  SolverConfig solver{};
};

/// Monte-Carlo mean of the expected cost of each allocation. All
/// allocations see the same channel draws. Sample k uses stream
/// (seed, k); results do not depend on the thread count. A static
/// fading config is evaluated once on the mean channel.
std::vector<McEstimate> monte_carlo_q(Mode mode, const std::vector<CacheAllocation>& allocs,
                                      const FileCatalog& catalog, const FadingConfig& cfg,
                                      const MaxPowerPolicy& policy, const McOptions& opt);

McEstimate monte_carlo_q(Mode mode, const CacheAllocation& alloc, const FileCatalog& catalog,
                         const FadingConfig& cfg, const MaxPowerPolicy& policy,
                         const McOptions& opt);

enum class PowerPolicyKind { kNone, kFixed, kCalibrate };

struct AllocationSource {
  std::string label;
  std::optional<AllocatorKind> kind;       // computed allocator
  std::optional<CacheAllocation> fixed;    // explicit placement
};

struct ScenarioConfig {
  std::vector<Mode> modes{Mode::CA};
  FileCatalog catalog{{{1.0, 1.0}}};
  std::size_t cache_size = 1;
  FadingConfig fading{};
  std::vector<double> grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<AllocationSource> sources;
  McOptions mc{};
  PowerPolicyKind power_policy = PowerPolicyKind::kNone;
  double p_max = kNoPowerCap;
  double outage_target = 1e-5;
  std::size_t calibration_samples = 1000000;
  bool dedup_swaps = true;
};

struct SweepRow {
  double mean_c;
  Mode mode;
  std::string allocator;
  CacheAllocation allocation;
  double q_linear;
  double q_db;
  double mbs_usage_prob;
  double outage_rate;
  std::size_t n_samples;
  std::uint64_t seed;
  std::size_t evaluations;  // Q evaluations behind the allocation choice
};

/// Policy the sweep applies (calibrated once per scenario if requested).
MaxPowerPolicy resolve_policy(const ScenarioConfig& sc);

/// Rows ordered by grid point, then mode, then source.
std::vector<SweepRow> sweep(const ScenarioConfig& sc);

}  // namespace hetcache
