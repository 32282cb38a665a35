// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "hetcache/core_model.hpp"

namespace hetcache {

/// Maps an allocation to its expected power. Must be deterministic.
using CostFn = std::function<double(const CacheAllocation&)>;

struct AllocationResult {
  CacheAllocation allocation;
  double q_value;
  std::size_t evaluations;
};

struct ExhaustiveOptions {
  /// Evaluate only one of each (x1, x2) / (x2, x1) pair; exact when the
  /// cost is invariant under swapping the two caches.
  bool dedup_swaps = true;
};

/// All M-subsets of {0..N-1} in lexicographic order.
std::vector<std::vector<std::size_t>> m_subsets(std::size_t N, std::size_t M);

/// Minimizer over all pairs of M-subsets. Ties go to the lexicographically
/// smallest (sbs1 list, sbs2 list).
AllocationResult exhaustive_search(const FileCatalog& catalog, std::size_t M,
                                   const CostFn& cost_fn, ExhaustiveOptions opt = {});

/// Alternating greedy on w_k = 2^{2 R_k} q_k: SBS1 takes the current best
/// file, then SBS2, M times. When 2M > N the leftover slots of each cache
/// take the highest-w files it does not hold yet.
CacheAllocation low_complexity(const FileCatalog& catalog, std::size_t M,
                               std::size_t* argmax_scans = nullptr);

std::vector<double> greedy_weights(const FileCatalog& catalog);

/// Both caches hold the same M most popular files (ties by lower index).
CacheAllocation top_popularity(const FileCatalog& catalog, std::size_t M);
/// Both caches hold the same M highest-rate files (ties by lower index).
CacheAllocation top_rate(const FileCatalog& catalog, std::size_t M);

enum class AllocatorKind { kExhaustive, kLowComplexity, kTopPopularity, kTopRate };

std::string_view to_string(AllocatorKind k);
AllocatorKind parse_allocator(std::string_view s);

}  // namespace hetcache
