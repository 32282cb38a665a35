// SPDX-License-Identifier: Apache-2.0
#include "hetcache/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace hetcache {

std::vector<std::vector<std::size_t>> m_subsets(std::size_t N, std::size_t M) {
  std::vector<std::vector<std::size_t>> out;
  if (M > N) return out;
  std::vector<std::size_t> idx(M);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    // Advance to the next combination in lexicographic order.
    std::size_t k = M;
    while (k > 0 && idx[k - 1] == N - M + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t t = k; t < M; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

AllocationResult exhaustive_search(const FileCatalog& catalog, std::size_t M,
                                   const CostFn& cost_fn, ExhaustiveOptions opt) {
  const std::size_t N = catalog.size();
  if (M > N) throw std::invalid_argument("cache size exceeds catalog size");
  const auto subsets = m_subsets(N, M);
  std::optional<CacheAllocation> best;
  double best_q = 0.0;
  std::size_t evals = 0;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (std::size_t b = opt.dedup_swaps ? a : 0; b < subsets.size(); ++b) {
      auto alloc = CacheAllocation::from_lists(N, M, subsets[a], subsets[b]);
      const double q = cost_fn(alloc);
      ++evals;
      // Strict improvement keeps the earliest (lexicographically smallest)
      // candidate on ties.
      if (!best || q < best_q) {
        best = std::move(alloc);
        best_q = q;
      }
    }
  }
  return {*best, best_q, evals};
}

std::vector<double> greedy_weights(const FileCatalog& catalog) {
  std::vector<double> w(catalog.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = std::exp2(2.0 * catalog.rate(k)) * catalog.popularity(k);
  return w;
}

namespace {

// Index of the largest weight among files not yet taken; lowest index wins ties.
std::size_t argmax_free(const std::vector<double>& w, const std::vector<std::uint8_t>& taken) {
  std::size_t best = w.size();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (taken[k]) continue;
    if (best == w.size() || w[k] > w[best]) best = k;
  }
  return best;
}

}  // namespace

CacheAllocation low_complexity(const FileCatalog& catalog, std::size_t M,
                               std::size_t* argmax_scans) {
  const std::size_t N = catalog.size();
  if (M > N) throw std::invalid_argument("cache size exceeds catalog size");
  const auto w = greedy_weights(catalog);
  std::vector<std::uint8_t> taken(N, 0), x1(N, 0), x2(N, 0);
  std::size_t scans = 0, n1 = 0, n2 = 0;
  for (std::size_t m = 0; m < M; ++m) {
    for (auto* x : {&x1, &x2}) {
      const std::size_t k = argmax_free(w, taken);
      ++scans;
      if (k == N) break;
      taken[k] = 1;
      (*x)[k] = 1;
      ++(x == &x1 ? n1 : n2);
    }
  }
  // Extension for 2M > N: top up each cache from its own complement.
  for (auto [x, n] : {std::pair{&x1, &n1}, std::pair{&x2, &n2}}) {
    while (*n < M) {
      const std::size_t k = argmax_free(w, *x);
      (*x)[k] = 1;
      ++*n;
    }
  }
  if (argmax_scans) *argmax_scans = scans;
  return CacheAllocation(std::move(x1), std::move(x2), M);
}

namespace {

CacheAllocation top_by(const FileCatalog& catalog, std::size_t M,
                       double (FileCatalog::*key)(std::size_t) const) {
  const std::size_t N = catalog.size();
  if (M > N) throw std::invalid_argument("cache size exceeds catalog size");
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (catalog.*key)(a) > (catalog.*key)(b);
  });
  order.resize(M);
  return CacheAllocation::from_lists(N, M, order, order);
}

}  // namespace

CacheAllocation top_popularity(const FileCatalog& catalog, std::size_t M) {
  return top_by(catalog, M, &FileCatalog::popularity);
}

CacheAllocation top_rate(const FileCatalog& catalog, std::size_t M) {
  return top_by(catalog, M, &FileCatalog::rate);
}

std::string_view to_string(AllocatorKind k) {
  switch (k) {
    case AllocatorKind::kExhaustive: return "exhaustive";
    case AllocatorKind::kLowComplexity: return "lowc";
    case AllocatorKind::kTopPopularity: return "pop";
    case AllocatorKind::kTopRate: return "rate";
  }
  return "?";
}

AllocatorKind parse_allocator(std::string_view s) {
  if (s == "exhaustive" || s == "optimal") return AllocatorKind::kExhaustive;
  if (s == "lowc" || s == "low_complexity") return AllocatorKind::kLowComplexity;
  if (s == "pop" || s == "top_popularity") return AllocatorKind::kTopPopularity;
  if (s == "rate" || s == "top_rate") return AllocatorKind::kTopRate;
  throw std::invalid_argument("unknown allocator '" + std::string(s) + "'");
}

}  // namespace hetcache
