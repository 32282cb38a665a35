// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace hetcache {

/// Counter-based generator: the n-th output of stream (seed, index) is a
/// pure function of (seed, index, n), so Monte-Carlo sample k draws the
/// same numbers regardless of thread count or evaluation order.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal via Box-Muller; both variates of a pair are used.
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace hetcache
