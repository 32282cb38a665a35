// SPDX-License-Identifier: Apache-2.0
#include "hetcache/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "hetcache/link_solvers.hpp"

namespace hetcache {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Fixed block size keeps the reduction order independent of thread count.
constexpr std::size_t kBlock = 32;
}  // namespace

void FadingConfig::validate() const {
  for (double m : {mean_a11, mean_a22, mean_a10, mean_a20})
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("channel means must be > 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
  if (!(mean_c >= 0.0) || !std::isfinite(mean_c)) throw std::invalid_argument("mean_c must be >= 0");
}

ChannelState mean_channel(const FadingConfig& cfg) {
  ChannelState ch;
  ch.a11 = cfg.mean_a11;
  ch.a22 = cfg.mean_a22;
  ch.a12 = cfg.mean_c * cfg.mean_a22;
  ch.a21 = cfg.mean_c * cfg.mean_a11;
  ch.a10 = cfg.mean_a10;
  ch.a20 = cfg.mean_a20;
  return ch;
}

double lognormal(double mean, double sigma, double z) {
  if (mean == 0.0) return 0.0;
  if (sigma == 0.0) return mean;
  return std::exp(std::log(mean) - 0.5 * sigma * sigma + sigma * z);
}

ChannelState sample_channel(const FadingConfig& cfg, RandomStream& stream) {
  double z[6];
  for (double& v : z) v = stream.normal();
  const double ss = cfg.fade_sbs ? cfg.sigma : 0.0;
  const double sm = cfg.fade_mbs ? cfg.sigma : 0.0;
  ChannelState ch;
  ch.a11 = lognormal(cfg.mean_a11, ss, z[0]);
  ch.a22 = lognormal(cfg.mean_a22, ss, z[1]);
  ch.a12 = lognormal(cfg.mean_c, ss, z[2]) * ch.a22;
  ch.a21 = lognormal(cfg.mean_c, ss, z[3]) * ch.a11;
  ch.a10 = lognormal(cfg.mean_a10, sm, z[4]);
  ch.a20 = lognormal(cfg.mean_a20, sm, z[5]);
  return ch;
}

double gin_required_sbs_power(const ChannelState& ch, double rate) {
  const LinkCost c = cost_gin(rate, rate, ch);
  if (!c.feasible) return kInf;
  return std::max(c.p_tx1, c.p_tx2);
}

MaxPowerPolicy calibrate_pmax(const FadingConfig& cfg, const FileCatalog& catalog,
                              double outage_target, std::size_t n_samples, std::uint64_t seed,
                              double mean_c) {
  if (!(outage_target > 0.0 && outage_target < 1.0))
    throw std::invalid_argument("outage target must lie in (0,1)");
  FadingConfig c = cfg;
  c.mean_c = mean_c;
  c.validate();
  MaxPowerPolicy pol;
  pol.enabled = true;
  pol.outage_target = outage_target;
  pol.calibration_mean_c = mean_c;
  pol.calibration_rate = catalog.max_rate();

  if (c.is_static()) {
    const double p = gin_required_sbs_power(mean_channel(c), pol.calibration_rate);
    pol.p_max = p;
    pol.infeasible_rate = std::isfinite(p) ? 0.0 : 1.0;
    pol.calibration_samples = 1;
    return pol;
  }
  if (n_samples == 0) throw std::invalid_argument("calibration needs at least one sample");
  std::vector<double> req;
  req.reserve(n_samples);
  std::size_t infeasible = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    RandomStream rs(seed, k);
    const double p = gin_required_sbs_power(sample_channel(c, rs), pol.calibration_rate);
    if (std::isfinite(p))
      req.push_back(p);
    else
      ++infeasible;
  }
  pol.calibration_samples = n_samples;
  pol.infeasible_rate = static_cast<double>(infeasible) / static_cast<double>(n_samples);
  if (req.empty()) {
    pol.p_max = kInf;
    return pol;
  }
  // Exceedances allowed among all draws, or among feasible ones when the
  // infeasible mass alone is above target.
  std::size_t allowed;
  if (pol.infeasible_rate <= outage_target) {
    const auto budget = static_cast<std::size_t>(std::floor(outage_target * static_cast<double>(n_samples)));
    allowed = budget - std::min(budget, infeasible);
  } else {
    allowed = static_cast<std::size_t>(std::floor(outage_target * static_cast<double>(req.size())));
  }
  allowed = std::min(allowed, req.size() - 1);
  const std::size_t idx = req.size() - 1 - allowed;
  std::nth_element(req.begin(), req.begin() + static_cast<std::ptrdiff_t>(idx), req.end());
  pol.p_max = req[idx];
  return pol;
}

double measure_exceedance(const FadingConfig& cfg, double rate, double p_max,
                          std::size_t n_samples, std::uint64_t seed, bool feasible_only) {
  std::size_t over = 0, counted = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    RandomStream rs(seed, k);
    const double need = gin_required_sbs_power(sample_channel(cfg, rs), rate);
    if (feasible_only && !std::isfinite(need)) continue;
    ++counted;
    if (need > p_max) ++over;
  }
  return counted ? static_cast<double>(over) / static_cast<double>(counted) : 0.0;
}

namespace {

struct Acc {
  CompensatedSum q, q2, mbs, outage, fallback;
  std::array<CompensatedSum, kNumStrategies> mass;

  void add(const ExpectedCost& e) {
    q.add(e.q_value);
    q2.add(e.q_value * e.q_value);
    mbs.add(e.mbs_usage_prob);
    outage.add(e.outage_prob);
    fallback.add(e.fallback_prob);
    for (int k = 0; k < kNumStrategies; ++k) mass[k].add(e.strategy_mass[k]);
  }
  void merge(const Acc& o) {
    q.add(o.q.value());
    q2.add(o.q2.value());
    mbs.add(o.mbs.value());
    outage.add(o.outage.value());
    fallback.add(o.fallback.value());
    for (int k = 0; k < kNumStrategies; ++k) mass[k].add(o.mass[k].value());
  }
};

McEstimate finish(const Acc& a, std::size_t n) {
  McEstimate m;
  const double dn = static_cast<double>(n);
  m.n_samples = n;
  m.q_value = a.q.value() / dn;
  if (n > 1 && std::isfinite(m.q_value)) {
    const double var = std::max(0.0, (a.q2.value() - dn * m.q_value * m.q_value) / (dn - 1.0));
    m.q_stderr = std::sqrt(var / dn);
  }
  m.mbs_usage_prob = a.mbs.value() / dn;
  m.outage_rate = a.outage.value() / dn;
  m.fallback_rate = a.fallback.value() / dn;
  for (int k = 0; k < kNumStrategies; ++k) m.strategy_mass[k] = a.mass[k].value() / dn;
  return m;
}

}  // namespace

std::vector<McEstimate> monte_carlo_q(Mode mode, const std::vector<CacheAllocation>& allocs,
                                      const FileCatalog& catalog, const FadingConfig& cfg,
                                      const MaxPowerPolicy& policy, const McOptions& opt) {
  cfg.validate();
  const double p_max = policy.enabled ? policy.p_max : kNoPowerCap;
  const std::size_t A = allocs.size();
  std::vector<McEstimate> out(A);
  if (A == 0) return out;

  if (cfg.is_static()) {
    RequestCostCache cache(catalog, mean_channel(cfg), opt.solver);
    for (std::size_t a = 0; a < A; ++a) {
      Acc acc;
      acc.add(expected_cost(mode, allocs[a], cache, p_max));
      out[a] = finish(acc, 1);
    }
    return out;
  }

  const std::size_t n = opt.n_samples;
  if (n == 0) throw std::invalid_argument("n_samples must be >= 1");
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<Acc>> blocks(n_blocks, std::vector<Acc>(A));
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      const std::size_t end = std::min(n, (b + 1) * kBlock);
      for (std::size_t k = b * kBlock; k < end; ++k) {
        RandomStream rs(opt.seed, k);
        RequestCostCache cache(catalog, sample_channel(cfg, rs), opt.solver);
        for (std::size_t a = 0; a < A; ++a)
          blocks[b][a].add(expected_cost(mode, allocs[a], cache, p_max));
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(n_blocks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t a = 0; a < A; ++a) {
    Acc total;
    for (std::size_t b = 0; b < n_blocks; ++b) total.merge(blocks[b][a]);
    out[a] = finish(total, n);
  }
  return out;
}

McEstimate monte_carlo_q(Mode mode, const CacheAllocation& alloc, const FileCatalog& catalog,
                         const FadingConfig& cfg, const MaxPowerPolicy& policy,
                         const McOptions& opt) {
  return monte_carlo_q(mode, std::vector<CacheAllocation>{alloc}, catalog, cfg, policy, opt)
      .front();
}

MaxPowerPolicy resolve_policy(const ScenarioConfig& sc) {
  MaxPowerPolicy pol;
  switch (sc.power_policy) {
    case PowerPolicyKind::kNone:
      break;
    case PowerPolicyKind::kFixed:
      if (!(sc.p_max > 0.0)) throw std::invalid_argument("p_max must be > 0");
      pol.enabled = true;
      pol.p_max = sc.p_max;
      pol.outage_target = sc.outage_target;
      break;
    case PowerPolicyKind::kCalibrate:
      pol = calibrate_pmax(sc.fading, sc.catalog, sc.outage_target, sc.calibration_samples,
                           sc.mc.seed);
      break;
  }
  return pol;
}

std::vector<SweepRow> sweep(const ScenarioConfig& sc) {
  const FileCatalog& cat = sc.catalog;
  const std::size_t N = cat.size(), M = sc.cache_size;
  if (M > N) throw std::invalid_argument("cache size exceeds catalog size");
  if (sc.sources.empty()) throw std::invalid_argument("no allocation sources requested");
  const MaxPowerPolicy policy = resolve_policy(sc);

  // Channel-independent allocations are fixed for the whole sweep.
  std::vector<CacheAllocation> pool;
  std::map<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>, std::size_t> index;
  auto intern = [&](const CacheAllocation& a) {
    auto key = std::make_pair(a.x1(), a.x2());
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    pool.push_back(a);
    index.emplace(std::move(key), pool.size() - 1);
    return pool.size() - 1;
  };

  bool need_exhaustive = false;
  std::vector<std::optional<std::size_t>> source_slot(sc.sources.size());
  std::vector<std::size_t> source_evals(sc.sources.size(), 1);
  for (std::size_t s = 0; s < sc.sources.size(); ++s) {
    const auto& src = sc.sources[s];
    if (src.fixed) {
      if (src.fixed->num_files() != N) throw std::invalid_argument("allocation size differs from catalog");
      source_slot[s] = intern(*src.fixed);
      continue;
    }
    switch (*src.kind) {
      case AllocatorKind::kExhaustive:
        need_exhaustive = true;
        break;
      case AllocatorKind::kLowComplexity:
        source_slot[s] = intern(low_complexity(cat, M));
        break;
      case AllocatorKind::kTopPopularity:
        source_slot[s] = intern(top_popularity(cat, M));
        break;
      case AllocatorKind::kTopRate:
        source_slot[s] = intern(top_rate(cat, M));
        break;
    }
  }
  std::vector<std::size_t> candidates;  // exhaustive candidates in lexicographic order
  if (need_exhaustive) {
    const auto subsets = m_subsets(N, M);
    for (std::size_t a = 0; a < subsets.size(); ++a)
      for (std::size_t b = sc.dedup_swaps ? a : 0; b < subsets.size(); ++b)
        candidates.push_back(intern(CacheAllocation::from_lists(N, M, subsets[a], subsets[b])));
  }

  std::vector<SweepRow> rows;
  for (double c : sc.grid) {
    FadingConfig f = sc.fading;
    f.mean_c = c;
    for (Mode mode : sc.modes) {
      const auto est = monte_carlo_q(mode, pool, cat, f, policy, sc.mc);
      std::size_t best = 0;
      if (need_exhaustive) {
        best = candidates.front();
        for (std::size_t idx : candidates)
          if (est[idx].q_value < est[best].q_value) best = idx;
      }
      for (std::size_t s = 0; s < sc.sources.size(); ++s) {
        const std::size_t slot = source_slot[s] ? *source_slot[s] : best;
        const McEstimate& e = est[slot];
        rows.push_back({c, mode, sc.sources[s].label, pool[slot], e.q_value, to_db(e.q_value),
                        e.mbs_usage_prob, e.outage_rate, e.n_samples, sc.mc.seed,
                        source_slot[s] ? source_evals[s] : candidates.size()});
      }
    }
  }
  return rows;
}

}  // namespace hetcache
