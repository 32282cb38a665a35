// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hetcache {

/// Room for probabilities printed to four decimals.
inline constexpr double kPopularitySumTolerance = 1e-3;

struct FileSpec {
  double rate = 0.0;
  double popularity = 0.0;
};

/// Ordered file library. Rates are in bits/s/Hz per complex dimension,
/// popularities are request probabilities summing to one within
/// kPopularitySumTolerance; they are used as given, not renormalized.
class FileCatalog {
 public:
  explicit FileCatalog(std::vector<FileSpec> files);

  std::size_t size() const { return files_.size(); }
  double rate(std::size_t i) const { return files_.at(i).rate; }
  double popularity(std::size_t i) const { return files_.at(i).popularity; }
  const std::vector<FileSpec>& files() const { return files_; }
  double max_rate() const;

 private:
  std::vector<FileSpec> files_;
};

/// Noise-normalized linear power gains. a_nm is the gain from SBS m to
/// user n; a_n0 is the gain from the MBS to user n.
///
/// Direct (a11, a22) and MBS gains must be positive. Cross gains may be
/// zero, which models a decoupled channel; any strategy that needs a
/// zero-gain link reports itself infeasible.
struct ChannelState {
  double a11 = 1.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 1.0;
  double a10 = 0.01;
  double a20 = 0.01;

  double c12() const { return a12 / a22; }
  double c21() const { return a21 / a11; }
  double a_plus0() const { return a10 >= a20 ? a10 : a20; }
  double a_minus0() const { return a10 >= a20 ? a20 : a10; }
  /// Gain from SBS n (1 or 2) to user u (1 or 2).
  double gain(int user, int sbs) const;
  /// Gain from the MBS to user u.
  double mbs_gain(int user) const { return user == 1 ? a10 : a20; }
};

/// Throws std::invalid_argument when a gain is negative, non-finite, or a
/// direct/MBS gain is below kMinGain. Cross gains in (0, kMinGain) are
/// rejected as well.
void validate(const ChannelState& ch);

inline constexpr double kMinGain = 1e-12;

struct StandardForm {
  double c12;
  double c21;
};

StandardForm to_standard_form(const ChannelState& ch);

struct GainOrder {
  double R_plus;
  double a_plus;
  double R_minus;
  double a_minus;
};

/// Equal gains put user A on the "+" side.
GainOrder order_by_gain(double rA, double aA, double rB, double aB);

class CacheAllocation {
 public:
  CacheAllocation(std::vector<std::uint8_t> x1, std::vector<std::uint8_t> x2,
                  std::size_t M);

  /// Builds an allocation from 0-based file index lists.
  static CacheAllocation from_lists(std::size_t N, std::size_t M,
                                    const std::vector<std::size_t>& sbs1,
                                    const std::vector<std::size_t>& sbs2);

  std::size_t num_files() const { return x1_.size(); }
  std::size_t capacity() const { return M_; }
  /// sbs is 1 or 2.
  bool has(int sbs, std::size_t file) const {
    return (sbs == 1 ? x1_ : x2_)[file] != 0;
  }
  const std::vector<std::uint8_t>& x1() const { return x1_; }
  const std::vector<std::uint8_t>& x2() const { return x2_; }
  std::vector<std::size_t> files_at(int sbs) const;
  CacheAllocation swapped() const;

  friend bool operator==(const CacheAllocation&, const CacheAllocation&) = default;

 private:
  std::vector<std::uint8_t> x1_;
  std::vector<std::uint8_t> x2_;
  std::size_t M_;
};

struct Demand {
  std::size_t i;  // file requested by user 1
  std::size_t j;  // file requested by user 2
};

enum class Strategy {
  GIc,
  GIN,
  MC_MBS,
  MC_SBS,
  BC_MBS,
  BC_SBS,
  MIMO,
  ORTH,
  MISO,
  GIwc,
};

inline constexpr int kNumStrategies = 10;

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

struct LinkCost {
  Strategy strategy = Strategy::MC_MBS;
  double total_power = 0.0;
  double p_tx1 = 0.0;
  double p_tx2 = 0.0;
  double p_mbs = 0.0;
  bool mbs_used = false;
  bool feasible = true;

  static LinkCost make(Strategy s, double p1, double p2, double pm);
  static LinkCost infeasible(Strategy s);
};

/// 2^{2R} - 1, the SNR a point-to-point link needs for rate R.
double required_snr(double rate);
/// 0.5 * log2(1 + x).
double capacity(double snr);
double to_db(double linear);

}  // namespace hetcache
