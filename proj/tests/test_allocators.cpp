// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hetcache/allocators.hpp"
#include "hetcache/dispatch.hpp"

using namespace hetcache;

namespace {

using Files = std::vector<std::size_t>;

FileCatalog table_direct() {
  return FileCatalog({{1.2, 0.45}, {1.0, 0.20}, {0.5, 0.15}, {0.4, 0.15}, {0.2, 0.05}});
}
FileCatalog table_inverse() {
  return FileCatalog({{1.2, 0.05}, {1.0, 0.15}, {0.5, 0.15}, {0.4, 0.20}, {0.2, 0.45}});
}
FileCatalog table_n10() {
  return FileCatalog({{1.2, .5911}, {.2, .1697}, {1.4, .0818}, {.8, .0487}, {1.8, .0326},
                      {1.0, .0235}, {1.6, .0178}, {.6, .0140}, {2.0, .0113}, {.4, .0094}});
}

}  // namespace

TEST_CASE("subsets in lexicographic order") {
  const auto s = m_subsets(5, 2);
  CHECK(s.size() == 10);
  CHECK(s.front() == Files{0, 1});
  CHECK(s.back() == Files{3, 4});
  CHECK(m_subsets(10, 2).size() == 45);
  CHECK(m_subsets(3, 3).size() == 1);
}

TEST_CASE("greedy weights and low-complexity placement") {
  const auto w = greedy_weights(table_direct());
  const double want[] = {2.375, 0.800, 0.300, 0.261, 0.066};
  for (int k = 0; k < 5; ++k) CHECK(w[k] == doctest::Approx(want[k]).epsilon(2e-3));
  auto a = low_complexity(table_direct(), 2);
  CHECK(a.files_at(1) == Files{0, 2});
  CHECK(a.files_at(2) == Files{1, 3});

  const auto wi = greedy_weights(table_inverse());
  const double want_i[] = {0.264, 0.600, 0.300, 0.348, 0.594};
  for (int k = 0; k < 5; ++k) CHECK(wi[k] == doctest::Approx(want_i[k]).epsilon(2e-3));
  a = low_complexity(table_inverse(), 2);
  CHECK(a.files_at(1) == Files{1, 3});
  CHECK(a.files_at(2) == Files{2, 4});

  // Identical files: alternate by index.
  const FileCatalog same({{1, .2}, {1, .2}, {1, .2}, {1, .2}, {1, .2}});
  std::size_t scans = 0;
  a = low_complexity(same, 2, &scans);
  CHECK(a.files_at(1) == Files{0, 2});
  CHECK(a.files_at(2) == Files{1, 3});
  CHECK(scans == 4);
}

TEST_CASE("low-complexity placement fills both caches when 2M > N") {
  const FileCatalog cat({{1.0, 0.5}, {0.5, 0.3}, {0.2, 0.2}});
  const auto a = low_complexity(cat, 2);
  CHECK(a.files_at(1).size() == 2);
  CHECK(a.files_at(2).size() == 2);
  CHECK(a.files_at(1) == Files{0, 2});
  CHECK(a.files_at(2) == Files{0, 1});
}

TEST_CASE("benchmark placements") {
  CHECK(top_popularity(table_direct(), 2).files_at(1) == Files{0, 1});
  CHECK(top_popularity(table_direct(), 2).files_at(2) == Files{0, 1});
  CHECK(top_rate(table_n10(), 2).files_at(1) == Files{4, 8});
  CHECK(top_rate(table_n10(), 2).files_at(2) == Files{4, 8});
  CHECK(top_popularity(table_n10(), 2).files_at(1) == Files{0, 1});
  for (const auto k : {AllocatorKind::kExhaustive, AllocatorKind::kLowComplexity,
                       AllocatorKind::kTopPopularity, AllocatorKind::kTopRate})
    CHECK(parse_allocator(to_string(k)) == k);
  CHECK_THROWS(parse_allocator("random"));
}

TEST_CASE("exhaustive search on a single file") {
  const FileCatalog one({{1.0, 1.0}});
  const auto r = exhaustive_search(one, 1, [](const CacheAllocation&) { return 1.0; });
  CHECK(r.allocation.has(1, 0));
  CHECK(r.allocation.has(2, 0));
  CHECK(r.evaluations == 1);
}

TEST_CASE("exhaustive search on the two-file toy matches hand enumeration") {
  const FileCatalog cat({{1.0, 0.5}, {0.1, 0.5}});
  const ChannelState ch{1, 1e-3, 1e-3, 1, 0.01, 0.01};
  auto q = [&](const CacheAllocation& a) { return expected_cost(Mode::CA, a, cat, ch).q_value; };
  double best = INFINITY;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      best = std::min(best, q(CacheAllocation::from_lists(2, 1, {a}, {b})));
  const auto r = exhaustive_search(cat, 1, q);
  CHECK(r.q_value == best);
  CHECK(r.evaluations == 3);
  const auto full = exhaustive_search(cat, 1, q, {false});
  CHECK(full.evaluations == 4);
  CHECK(full.q_value == best);
}

TEST_CASE("exhaustive search beats the split placement at moderate interference") {
  const auto cat = table_direct();
  const ChannelState ch{1, 0.4, 0.4, 1, 0.01, 0.01};
  auto q = [&](const CacheAllocation& a) { return expected_cost(Mode::CA, a, cat, ch).q_value; };
  const auto r = exhaustive_search(cat, 2, q);
  CHECK(r.evaluations == 55);
  CHECK(r.q_value <= q(CacheAllocation::from_lists(5, 2, {0, 2}, {1, 3})));
}

TEST_CASE("ties go to the lexicographically smallest placement") {
  const auto r = exhaustive_search(table_direct(), 2, [](const CacheAllocation&) { return 0.0; });
  CHECK(r.allocation.files_at(1) == Files{0, 1});
  CHECK(r.allocation.files_at(2) == Files{0, 1});
}
