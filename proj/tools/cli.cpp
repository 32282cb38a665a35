// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "hetcache/link_solvers.hpp"

namespace hetcache::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kVersion = "0.1.0";

std::vector<std::string> split_list(std::string_view text, const char* seps = ",") {
  std::vector<std::string> parts;
  std::string s(text);
  boost::split(parts, s, boost::is_any_of(seps));
  for (auto& p : parts) boost::trim(p);
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  return parts;
}

double to_double(const std::string& s, std::string_view what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::invalid_argument(fmt::format("{}: '{}' is not a number", what, s));
  return v;
}

std::vector<double> get_doubles(const Tree& t, const std::string& key) {
  std::vector<double> out;
  for (const auto& p : split_list(t.get<std::string>(key))) out.push_back(to_double(p, key));
  return out;
}

std::string json_scalar(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string json_flat(const ojson& v) {
  if (!v.is_array()) return json_scalar(v);
  std::string out;
  const bool nested = !v.empty() && v.front().is_array();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += nested ? "|" : ",";
    out += json_flat(v[k]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << data;
  f.flush();
  if (!f) throw std::runtime_error("cannot write " + path);
}

}  // namespace

Tree parse_ini(const std::string& text) {
  std::istringstream in(text);
  Tree t;
  boost::property_tree::ini_parser::read_ini(in, t);
  return t;
}

Tree parse_json(const std::string& text) {
  const ojson j = ojson::parse(text);
  if (!j.is_object()) throw std::invalid_argument("JSON config must be an object");
  Tree t;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) {
      t.put(section, json_flat(body));
      continue;
    }
    Tree sec;
    for (const auto& [key, value] : body.items()) sec.push_back({key, Tree(json_flat(value))});
    t.push_back({section, sec});
  }
  return t;
}

LoadedConfig load_config(const std::string& path) {
  LoadedConfig c;
  c.path = path;
  c.text = read_file(path);
  c.tree = boost::algorithm::iends_with(path, ".json") ? parse_json(c.text) : parse_ini(c.text);
  return c;
}

CacheAllocation parse_allocation(std::string_view text, std::size_t N, std::size_t M) {
  const auto halves = split_list(text, "|");
  if (halves.size() != 2)
    throw std::invalid_argument(fmt::format("allocation '{}' must look like 1,3|2,4", text));
  std::vector<std::size_t> lists[2];
  for (int h = 0; h < 2; ++h) {
    for (const auto& f : split_list(halves[h])) {
      const double v = to_double(f, "allocation");
      if (v < 1 || v > static_cast<double>(N) || v != std::floor(v))
        throw std::invalid_argument(fmt::format("allocation file '{}' out of range 1..{}", f, N));
      lists[h].push_back(static_cast<std::size_t>(v) - 1);
    }
  }
  return CacheAllocation::from_lists(N, M, lists[0], lists[1]);
}

SolverConfig solver_from_tree(const Tree& t) {
  SolverConfig s;
  s.hk_dP_max = t.get("solver.hk_dp_max", s.hk_dP_max);
  s.hk_dP_min = t.get("solver.hk_dp_min", s.hk_dP_min);
  s.hk_dLam_max = t.get("solver.hk_dlam_max", s.hk_dLam_max);
  s.hk_dLam_min = t.get("solver.hk_dlam_min", s.hk_dLam_min);
  s.hk_dptot_max_rel = t.get("solver.hk_dptot_max_rel", s.hk_dptot_max_rel);
  s.hk_dptot_min_rel = t.get("solver.hk_dptot_min_rel", s.hk_dptot_min_rel);
  s.mimo_eps_rel = t.get("solver.mimo_eps_rel", s.mimo_eps_rel);
  const auto variant = t.get<std::string>("solver.hk_variant", "symmetric");
  if (variant == "symmetric")
    s.hk_variant = HkVariant::kSymmetric;
  else if (variant == "literal")
    s.hk_variant = HkVariant::kLiteral;
  else
    throw std::invalid_argument("solver.hk_variant must be symmetric or literal");
  return s;
}

ScenarioConfig scenario_from_tree(const Tree& t) {
  ScenarioConfig sc;

  const auto cat_node = t.get_child_optional("catalog");
  if (!cat_node || cat_node->empty()) throw std::invalid_argument("config needs a [catalog] section");
  std::vector<FileSpec> files;
  for (const auto& [key, node] : *cat_node) {
    const auto parts = split_list(node.data());
    if (parts.size() != 2)
      throw std::invalid_argument("catalog." + key + " must be 'rate, popularity'");
    files.push_back({to_double(parts[0], "catalog." + key), to_double(parts[1], "catalog." + key)});
  }
  sc.catalog = FileCatalog(std::move(files));

  sc.modes.clear();
  for (const auto& m : split_list(t.get<std::string>("scenario.modes", "CA")))
    sc.modes.push_back(parse_mode(m));
  sc.cache_size = t.get<std::size_t>("scenario.cache_size", 1);
  if (t.get_optional<std::string>("scenario.grid")) sc.grid = get_doubles(t, "scenario.grid");
  sc.mc.seed = t.get<std::uint64_t>("scenario.seed", 1);
  sc.mc.n_samples = t.get<std::size_t>("scenario.n_samples", sc.mc.n_samples);
  sc.mc.threads = t.get<unsigned>("scenario.threads", 1);
  sc.dedup_swaps = t.get("scenario.dedup_swaps", true);
  sc.mc.solver = solver_from_tree(t);

  FadingConfig& f = sc.fading;
  f.mean_a11 = t.get("fading.mean_a11", f.mean_a11);
  f.mean_a22 = t.get("fading.mean_a22", f.mean_a22);
  f.mean_a10 = t.get("fading.mean_a10", f.mean_a10);
  f.mean_a20 = t.get("fading.mean_a20", f.mean_a20);
  f.sigma = t.get("fading.sigma", 0.0);
  f.fade_sbs = t.get("fading.fade_sbs", f.fade_sbs);
  f.fade_mbs = t.get("fading.fade_mbs", f.fade_mbs);

  if (const auto src = t.get_child_optional("sources")) {
    for (const auto& [label, node] : *src) {
      AllocationSource s;
      s.label = label;
      if (node.data().find('|') != std::string::npos)
        s.fixed = parse_allocation(node.data(), sc.catalog.size(), sc.cache_size);
      else
        s.kind = parse_allocator(boost::trim_copy(node.data()));
      sc.sources.push_back(std::move(s));
    }
  }

  const auto policy = t.get<std::string>("power.policy", "none");
  if (policy == "none")
    sc.power_policy = PowerPolicyKind::kNone;
  else if (policy == "fixed")
    sc.power_policy = PowerPolicyKind::kFixed;
  else if (policy == "calibrate")
    sc.power_policy = PowerPolicyKind::kCalibrate;
  else
    throw std::invalid_argument("power.policy must be none, fixed or calibrate");
  sc.p_max = t.get("power.p_max", sc.p_max);
  sc.outage_target = t.get("power.outage_target", sc.outage_target);
  sc.calibration_samples = t.get("power.calibration_samples", sc.calibration_samples);
  return sc;
}

std::string format_files(const std::vector<std::size_t>& files) {
  std::string out;
  for (std::size_t k = 0; k < files.size(); ++k) {
    if (k) out += ';';
    out += std::to_string(files[k] + 1);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.10g}", v);
}

std::string format_db(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.6f}", v);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", format_number(r.mean_c),
                       to_string(r.mode), r.allocator, format_files(r.allocation.files_at(1)),
                       format_files(r.allocation.files_at(2)), format_number(r.q_linear),
                       format_db(r.q_db), format_number(r.mbs_usage_prob),
                       format_number(r.outage_rate), r.n_samples, r.seed);
  }
  return out;
}

namespace {

ojson json_number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson json_files(const std::vector<std::size_t>& files) {
  ojson a = ojson::array();
  for (auto f : files) a.push_back(f + 1);
  return a;
}

}  // namespace

std::string sweep_json(const std::vector<SweepRow>& rows) {
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    ojson o;
    o["mean_c"] = r.mean_c;
    o["mode"] = std::string(to_string(r.mode));
    o["allocator"] = r.allocator;
    o["alloc_sbs1"] = json_files(r.allocation.files_at(1));
    o["alloc_sbs2"] = json_files(r.allocation.files_at(2));
    o["q_linear"] = json_number(r.q_linear);
    o["q_db"] = json_number(r.q_db);
    o["mbs_usage_prob"] = r.mbs_usage_prob;
    o["outage_rate"] = r.outage_rate;
    o["n_samples"] = r.n_samples;
    o["seed"] = r.seed;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string hex;
  for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", md[k]);
  return hex;
}

unsigned resolve_threads(int flag_value, unsigned fallback) {
  if (flag_value > 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("HETCACHE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return fallback > 0 ? fallback : 1;
}

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
  auto* cfg = sub->add_option("--config", c.config, "Scenario config (.ini or .json)");
  if (needs_config) cfg->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "Output file (default: stdout)");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", c.seed, "Override the configured seed");
  sub->add_option("--threads", c.threads, "Worker threads (also HETCACHE_THREADS)");
}

// Writes the payload and, when it went to a file, a manifest next to it.
void emit(const Common& c, std::string_view command, const std::string& payload,
          const LoadedConfig* cfg, std::uint64_t seed, unsigned threads, double seconds,
          std::ostream& out) {
  if (c.out.empty()) {
    out << payload;
    return;
  }
  write_file(c.out, payload);
  ojson m;
  m["tool"] = "hetcache";
  m["version"] = std::string(kVersion);
  m["command"] = std::string(command);
  m["config"] = cfg ? ojson(cfg->path) : ojson(nullptr);
  m["config_sha256"] = cfg ? ojson(sha256_hex(cfg->text)) : ojson(nullptr);
  m["seed"] = seed;
  m["threads"] = threads;
  m["format"] = c.format;
  m["wall_time_s"] = seconds;
  m["outputs"] = ojson::array({{{"path", c.out}, {"sha256", sha256_hex(payload)}}});
  write_file(c.out + ".manifest.json", m.dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- solve-link ----

struct LinkArgs {
  std::string strategy;
  double rate = -1.0;
  std::optional<double> rate2;
  std::optional<double> gain;
  int sbs = 0;
  ChannelState ch{};
  SolverConfig solver{};
  std::string variant = "symmetric";
};

Route link_route(const std::string& name, int sbs, bool* same_file) {
  const std::string s = boost::to_lower_copy(name);
  *same_file = false;
  if (s == "mc" || s == "mc_mbs" || s == "mc_sbs") {
    *same_file = true;
    if (s == "mc_sbs" && sbs == 0) throw std::invalid_argument("mc_sbs needs --sbs 1|2");
    return sbs ? Route{Strategy::MC_SBS, sbs, 0, false} : Route{Strategy::MC_MBS, 0, 0, false};
  }
  if (s == "bc" || s == "bc_mbs" || s == "bc_sbs") {
    if (s == "bc_sbs" && sbs == 0) throw std::invalid_argument("bc_sbs needs --sbs 1|2");
    return sbs ? Route{Strategy::BC_SBS, sbs, 0, false} : Route{Strategy::BC_MBS, 0, 0, false};
  }
  if (s == "orth") {
    const int n = sbs ? sbs : 1;
    return {Strategy::ORTH, n, n, false};
  }
  if (s == "miso") return {Strategy::MISO, 0, sbs ? sbs : 1, false};
  if (s == "gin") return {Strategy::GIN, 0, 0, false};
  if (s == "gic") {
    *same_file = true;
    return {Strategy::GIc, 0, 0, false};
  }
  if (s == "hk" || s == "giwc") return {Strategy::GIwc, 0, 0, false};
  if (s == "mimo") return {Strategy::MIMO, 0, 0, false};
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

std::string link_record(const LinkCost& c, const std::string& format) {
  if (format == "json") {
    ojson o;
    o["strategy"] = std::string(to_string(c.strategy));
    o["total_power"] = json_number(c.total_power);
    o["p_tx1"] = json_number(c.p_tx1);
    o["p_tx2"] = json_number(c.p_tx2);
    o["p_mbs"] = json_number(c.p_mbs);
    o["feasible"] = c.feasible;
    return o.dump(2) + "\n";
  }
  return fmt::format("strategy,total_power,p_tx1,p_tx2,p_mbs,feasible\n{},{},{},{},{},{}\n",
                     to_string(c.strategy), format_number(c.total_power), format_number(c.p_tx1),
                     format_number(c.p_tx2), format_number(c.p_mbs), c.feasible ? "true" : "false");
}

LinkCost solve_link(LinkArgs a) {
  if (!(a.rate >= 0.0) || !std::isfinite(a.rate)) throw std::invalid_argument("--rate must be >= 0");
  const double Rj = a.rate2.value_or(a.rate);
  if (!(Rj >= 0.0) || !std::isfinite(Rj)) throw std::invalid_argument("--rate2 must be >= 0");
  if (a.sbs < 0 || a.sbs > 2) throw std::invalid_argument("--sbs must be 0, 1 or 2");
  bool same_file = false;
  const Route r = link_route(a.strategy, a.sbs, &same_file);
  if (a.gain) {
    if (r.strategy != Strategy::MC_MBS && r.strategy != Strategy::MC_SBS)
      throw std::invalid_argument("--gain applies to multicast only");
    if (!(*a.gain > 0.0) || !std::isfinite(*a.gain)) throw std::invalid_argument("--gain must be > 0");
    return cost_multicast(a.rate, *a.gain, r.strategy);
  }
  validate(a.ch);
  if (a.variant == "literal")
    a.solver.hk_variant = HkVariant::kLiteral;
  else if (a.variant != "symmetric")
    throw std::invalid_argument("--hk-variant must be symmetric or literal");
  const FileCatalog cat({{a.rate, 0.5}, {Rj, 0.5}});
  return route_cost(r, same_file ? Demand{0, 0} : Demand{0, 1}, cat, a.ch, a.solver);
}

// ---- optimize ----

struct OptimizeArgs {
  std::string allocator;
  std::string mode;
  std::optional<double> mean_c;
};

struct OptimizeResult {
  Mode mode;
  std::string allocator;
  double mean_c;
  CacheAllocation allocation;
  double q_linear;
  std::size_t evaluations;
};

std::string optimize_payload(const OptimizeResult& r, const std::string& format) {
  if (format == "json") {
    ojson o;
    o["mode"] = std::string(to_string(r.mode));
    o["allocator"] = r.allocator;
    o["mean_c"] = json_number(r.mean_c);
    o["alloc_sbs1"] = json_files(r.allocation.files_at(1));
    o["alloc_sbs2"] = json_files(r.allocation.files_at(2));
    o["q_linear"] = json_number(r.q_linear);
    o["q_db"] = json_number(to_db(r.q_linear));
    o["evaluations"] = r.evaluations;
    return o.dump(2) + "\n";
  }
  return fmt::format("mode,allocator,mean_c,alloc_sbs1,alloc_sbs2,q_linear,q_db,evaluations\n"
                     "{},{},{},{},{},{},{},{}\n",
                     to_string(r.mode), r.allocator, format_number(r.mean_c),
                     format_files(r.allocation.files_at(1)),
                     format_files(r.allocation.files_at(2)), format_number(r.q_linear),
                     format_db(to_db(r.q_linear)), r.evaluations);
}

OptimizeResult optimize(const Tree& t, const OptimizeArgs& a, ScenarioConfig sc) {
  const AllocatorKind kind =
      parse_allocator(a.allocator.empty() ? t.get<std::string>("optimize.allocator", "exhaustive")
                                          : a.allocator);
  const Mode mode = a.mode.empty() ? sc.modes.front() : parse_mode(a.mode);

  if (const auto chn = t.get_child_optional("channel")) {
    // Explicit static channel.
    ChannelState ch;
    ch.a11 = chn->get("a11", ch.a11);
    ch.a12 = chn->get("a12", ch.a12);
    ch.a21 = chn->get("a21", ch.a21);
    ch.a22 = chn->get("a22", ch.a22);
    ch.a10 = chn->get("a10", ch.a10);
    ch.a20 = chn->get("a20", ch.a20);
    RequestCostCache cache(sc.catalog, ch, sc.mc.solver);
    const double p_max = sc.power_policy == PowerPolicyKind::kFixed ? sc.p_max : kNoPowerCap;
    auto q = [&](const CacheAllocation& x) { return expected_cost(mode, x, cache, p_max).q_value; };
    OptimizeResult r{mode, std::string(to_string(kind)), std::nan(""),
                     CacheAllocation(std::vector<std::uint8_t>(sc.catalog.size(), 0),
                                     std::vector<std::uint8_t>(sc.catalog.size(), 0), sc.cache_size),
                     0.0, 1};
    switch (kind) {
      case AllocatorKind::kExhaustive: {
        ExhaustiveOptions opt;
        opt.dedup_swaps = sc.dedup_swaps;
        const auto res = exhaustive_search(sc.catalog, sc.cache_size, q, opt);
        r.allocation = res.allocation;
        r.evaluations = res.evaluations;
        break;
      }
      case AllocatorKind::kLowComplexity:
        r.allocation = low_complexity(sc.catalog, sc.cache_size);
        break;
      case AllocatorKind::kTopPopularity:
        r.allocation = top_popularity(sc.catalog, sc.cache_size);
        break;
      case AllocatorKind::kTopRate:
        r.allocation = top_rate(sc.catalog, sc.cache_size);
        break;
    }
    r.q_linear = q(r.allocation);
    return r;
  }

  const double mean_c = a.mean_c.value_or(t.get("scenario.mean_c", sc.grid.empty() ? 0.0 : sc.grid.front()));
  sc.grid = {mean_c};
  sc.modes = {mode};
  sc.sources = {AllocationSource{std::string(to_string(kind)), kind, std::nullopt}};
  const auto rows = sweep(sc);
  const SweepRow& row = rows.front();
  return {mode, row.allocator, mean_c, row.allocation, row.q_linear, row.evaluations};
}

// ---- calibrate-pmax ----

std::string calibration_payload(const MaxPowerPolicy& p, std::uint64_t seed,
                                std::optional<double> measured, const std::string& format) {
  if (format == "json") {
    ojson o;
    o["p_max"] = json_number(p.p_max);
    o["outage_target"] = p.outage_target;
    o["calibration_mean_c"] = p.calibration_mean_c;
    o["calibration_rate"] = p.calibration_rate;
    o["infeasible_rate"] = p.infeasible_rate;
    o["samples"] = p.calibration_samples;
    o["seed"] = seed;
    o["measured_exceedance"] = measured ? ojson(*measured) : ojson(nullptr);
    return o.dump(2) + "\n";
  }
  return fmt::format(
      "p_max,outage_target,calibration_mean_c,calibration_rate,infeasible_rate,samples,seed,"
      "measured_exceedance\n{},{},{},{},{},{},{},{}\n",
      format_number(p.p_max), format_number(p.outage_target), format_number(p.calibration_mean_c),
      format_number(p.calibration_rate), format_number(p.infeasible_rate), p.calibration_samples,
      seed, measured ? format_number(*measured) : "");
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Power-minimizing cache placement for two small cells and a macro cell"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common lc, oc, sc_args, cc;
  LinkArgs link;
  auto* solve = app.add_subcommand("solve-link", "Minimum power of one transmission strategy");
  add_common(solve, lc, false);
  solve->add_option("--strategy", link.strategy,
                    "mc, bc, orth, miso, gin, gic, hk, mimo (or mc_sbs, bc_sbs)")
      ->required();
  solve->add_option("--rate", link.rate, "Rate of user 1's file (bits/s/Hz)")->required();
  solve->add_option("--rate2", link.rate2, "Rate of user 2's file (default: --rate)");
  solve->add_option("--gain", link.gain, "Single link gain for multicast");
  solve->add_option("--sbs", link.sbs, "Serving SBS for mc/bc/orth, served user for miso");
  solve->add_option("--a11", link.ch.a11);
  solve->add_option("--a12", link.ch.a12);
  solve->add_option("--a21", link.ch.a21);
  solve->add_option("--a22", link.ch.a22);
  solve->add_option("--a10", link.ch.a10);
  solve->add_option("--a20", link.ch.a20);
  solve->add_option("--hk-dp-max", link.solver.hk_dP_max);
  solve->add_option("--hk-dp-min", link.solver.hk_dP_min);
  solve->add_option("--hk-dlam-max", link.solver.hk_dLam_max);
  solve->add_option("--hk-dlam-min", link.solver.hk_dLam_min);
  solve->add_option("--hk-dptot-max-rel", link.solver.hk_dptot_max_rel);
  solve->add_option("--hk-dptot-min-rel", link.solver.hk_dptot_min_rel);
  solve->add_option("--hk-variant", link.variant)->check(CLI::IsMember({"symmetric", "literal"}));

  OptimizeArgs opt_args;
  auto* optimize_cmd = app.add_subcommand("optimize", "Choose a cache allocation");
  add_common(optimize_cmd, oc, true);
  optimize_cmd->add_option("--allocator", opt_args.allocator, "exhaustive, lowc, pop or rate");
  optimize_cmd->add_option("--mode", opt_args.mode, "CA or NCA");
  optimize_cmd->add_option("--mean-c", opt_args.mean_c, "Mean interference coefficient");

  auto* sweep_cmd = app.add_subcommand("sweep", "Cost of each allocation source over the grid");
  add_common(sweep_cmd, sc_args, true);

  std::optional<std::size_t> cal_samples, verify_samples;
  std::optional<double> cal_target;
  auto* cal = app.add_subcommand("calibrate-pmax", "Per-SBS power cap for a target outage");
  add_common(cal, cc, true);
  cal->add_option("--samples", cal_samples, "Calibration draws (default 1e6)");
  cal->add_option("--target", cal_target, "Outage target (default from config or 1e-5)");
  cal->add_option("--verify-samples", verify_samples,
                  "Replay the cap on a fresh seed and report the exceedance rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*solve) {
      const LinkCost c = solve_link(link);
      emit(lc, "solve-link", link_record(c, lc.format), nullptr, 0, 1, seconds_since(t0), out);
      return 0;
    }

    Common& c = *optimize_cmd ? oc : *sweep_cmd ? sc_args : cc;
    const LoadedConfig cfg = load_config(c.config);
    ScenarioConfig sc = scenario_from_tree(cfg.tree);
    if (c.seed) sc.mc.seed = *c.seed;
    sc.mc.threads = resolve_threads(c.threads, sc.mc.threads);

    if (*optimize_cmd) {
      const OptimizeResult r = optimize(cfg.tree, opt_args, sc);
      emit(c, "optimize", optimize_payload(r, c.format), &cfg, sc.mc.seed, sc.mc.threads,
           seconds_since(t0), out);
    } else if (*sweep_cmd) {
      const auto rows = sweep(sc);
      emit(c, "sweep", c.format == "json" ? sweep_json(rows) : sweep_csv(rows), &cfg, sc.mc.seed,
           sc.mc.threads, seconds_since(t0), out);
    } else {
      const double target = cal_target.value_or(sc.outage_target);
      const std::size_t n = cal_samples.value_or(sc.calibration_samples);
      const MaxPowerPolicy p = calibrate_pmax(sc.fading, sc.catalog, target, n, sc.mc.seed);
      std::optional<double> measured;
      if (verify_samples) {
        FadingConfig f = sc.fading;
        f.mean_c = p.calibration_mean_c;
        // Same population the cap was calibrated on.
        measured = measure_exceedance(f, p.calibration_rate, p.p_max, *verify_samples,
                                      sc.mc.seed + 1, p.infeasible_rate > p.outage_target);
      }
      emit(c, "calibrate-pmax", calibration_payload(p, sc.mc.seed, measured, c.format), &cfg,
           sc.mc.seed, 1, seconds_since(t0), out);
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace hetcache::cli
