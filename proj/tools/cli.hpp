// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "hetcache/scenario.hpp"

namespace hetcache::cli {

using Tree = boost::property_tree::ptree;

/// Parsed configuration plus the exact bytes it came from (for digests).
struct LoadedConfig {
  std::string path;
  std::string text;
  Tree tree;
};

/// INI unless the path ends in .json. JSON objects map to sections, arrays
/// are joined with ',' and arrays of arrays with '|'.
LoadedConfig load_config(const std::string& path);
Tree parse_ini(const std::string& text);
Tree parse_json(const std::string& text);

ScenarioConfig scenario_from_tree(const Tree& t);
SolverConfig solver_from_tree(const Tree& t);

/// "1,3|2,4" with 1-based file numbers.
CacheAllocation parse_allocation(std::string_view text, std::size_t N, std::size_t M);
std::string format_files(const std::vector<std::size_t>& files);  // 1-based, ';'-separated

std::string format_number(double v);  // %.10g, "inf"/"-inf"/"nan" spelled out
std::string format_db(double v);      // six decimals

inline constexpr std::string_view kSweepHeader =
    "mean_c,mode,allocator,alloc_sbs1,alloc_sbs2,q_linear,q_db,mbs_usage_prob,outage_rate,"
    "n_samples,seed";

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

std::string sha256_hex(std::string_view data);

/// Thread count: flag value if > 0, else HETCACHE_THREADS, else `fallback`.
unsigned resolve_threads(int flag_value, unsigned fallback);

/// Entry point behind the hetcache binary. Returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hetcache::cli
