// SPDX-License-Identifier: Apache-2.0
#include "hetcache/core_model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hetcache {

FileCatalog::FileCatalog(std::vector<FileSpec> files) : files_(std::move(files)) {
  if (files_.empty()) throw std::invalid_argument("catalog must hold at least one file");
  double sum = 0.0;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    const auto& f = files_[i];
    if (!std::isfinite(f.rate) || f.rate < 0.0)
      throw std::invalid_argument("file " + std::to_string(i + 1) + ": rate must be finite and >= 0");
    if (!(f.popularity >= 0.0 && f.popularity <= 1.0))
      throw std::invalid_argument("file " + std::to_string(i + 1) + ": popularity must lie in [0,1]");
    sum += f.popularity;
  }
  if (std::abs(sum - 1.0) > kPopularitySumTolerance)
    throw std::invalid_argument("popularities sum to " + std::to_string(sum) + ", expected 1");
}

double FileCatalog::max_rate() const {
  double r = 0.0;
  for (const auto& f : files_) r = std::max(r, f.rate);
  return r;
}

double ChannelState::gain(int user, int sbs) const {
  if (user == 1) return sbs == 1 ? a11 : a12;
  return sbs == 1 ? a21 : a22;
}

void validate(const ChannelState& ch) {
  auto positive = [](double g, const char* name) {
    if (!std::isfinite(g) || g < kMinGain)
      throw std::invalid_argument(std::string("gain ") + name + " must be finite and >= 1e-12");
  };
  auto cross = [](double g, const char* name) {
    if (!std::isfinite(g) || g < 0.0 || (g > 0.0 && g < kMinGain))
      throw std::invalid_argument(std::string("cross gain ") + name + " must be 0 or finite and >= 1e-12");
  };
  positive(ch.a11, "a11");
  positive(ch.a22, "a22");
  positive(ch.a10, "a10");
  positive(ch.a20, "a20");
  cross(ch.a12, "a12");
  cross(ch.a21, "a21");
}

StandardForm to_standard_form(const ChannelState& ch) { return {ch.c12(), ch.c21()}; }

GainOrder order_by_gain(double rA, double aA, double rB, double aB) {
  if (aA >= aB) return {rA, aA, rB, aB};
  return {rB, aB, rA, aA};
}

CacheAllocation::CacheAllocation(std::vector<std::uint8_t> x1, std::vector<std::uint8_t> x2,
                                 std::size_t M)
    : x1_(std::move(x1)), x2_(std::move(x2)), M_(M) {
  if (x1_.size() != x2_.size()) throw std::invalid_argument("placement vectors differ in length");
  auto count = [](const std::vector<std::uint8_t>& x) {
    std::size_t c = 0;
    for (auto b : x) {
      if (b > 1) throw std::invalid_argument("placement bits must be 0 or 1");
      c += b;
    }
    return c;
  };
  if (count(x1_) > M_ || count(x2_) > M_)
    throw std::invalid_argument("cache holds more than M files");
}

CacheAllocation CacheAllocation::from_lists(std::size_t N, std::size_t M,
                                            const std::vector<std::size_t>& sbs1,
                                            const std::vector<std::size_t>& sbs2) {
  std::vector<std::uint8_t> x1(N, 0), x2(N, 0);
  for (auto f : sbs1) {
    if (f >= N) throw std::invalid_argument("file index out of range");
    x1[f] = 1;
  }
  for (auto f : sbs2) {
    if (f >= N) throw std::invalid_argument("file index out of range");
    x2[f] = 1;
  }
  return CacheAllocation(std::move(x1), std::move(x2), M);
}

std::vector<std::size_t> CacheAllocation::files_at(int sbs) const {
  const auto& x = sbs == 1 ? x1_ : x2_;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) out.push_back(i);
  return out;
}

CacheAllocation CacheAllocation::swapped() const { return CacheAllocation(x2_, x1_, M_); }

namespace {
constexpr std::array<std::string_view, kNumStrategies> kNames = {
    "GIc", "GIN", "MC_MBS", "MC_SBS", "BC_MBS", "BC_SBS", "MIMO", "ORTH", "MISO", "GIwc"};
}

std::string_view to_string(Strategy s) { return kNames[static_cast<int>(s)]; }

Strategy parse_strategy(std::string_view s) {
  for (int k = 0; k < kNumStrategies; ++k)
    if (kNames[k] == s) return static_cast<Strategy>(k);
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
}

namespace {
bool uses_mbs(Strategy s) {
  return s == Strategy::MC_MBS || s == Strategy::BC_MBS || s == Strategy::ORTH ||
         s == Strategy::MISO;
}
}  // namespace

LinkCost LinkCost::make(Strategy s, double p1, double p2, double pm) {
  LinkCost c;
  c.strategy = s;
  c.p_tx1 = p1;
  c.p_tx2 = p2;
  c.p_mbs = pm;
  c.total_power = p1 + p2 + pm;
  c.mbs_used = uses_mbs(s);
  c.feasible = std::isfinite(c.total_power);
  return c;
}

LinkCost LinkCost::infeasible(Strategy s) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  LinkCost c;
  c.strategy = s;
  c.total_power = inf;
  c.p_tx1 = 0.0;
  c.p_tx2 = 0.0;
  c.p_mbs = 0.0;
  c.mbs_used = uses_mbs(s);
  c.feasible = false;
  return c;
}

double required_snr(double rate) { return std::expm1(2.0 * rate * std::log(2.0)); }

double capacity(double snr) { return 0.5 * std::log1p(snr) / std::log(2.0); }

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace hetcache
