#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <functional>
#include <limits>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "memcon/memory_graph.hpp"
#include "memcon/random.hpp"
#include "memcon/simulation.hpp"
#include "memcon/statistics.hpp"
#include "memcon/structure.hpp"
#include "memcon/text.hpp"
#include "memcon/topology.hpp"

namespace memcon {

enum class Arm { memoryless, memory };

inline std::string_view arm_name(Arm a) { return a == Arm::memory ? "memory" : "memoryless"; }

inline Arm parse_arm(std::string_view s) {
  if (s == "memory") return Arm::memory;
  if (s == "memoryless") return Arm::memoryless;
  throw invalid_input("unknown arm '" + std::string(s) + "'");
}

// One row of an experiment table. tau is the ratio of this arm's mean to the
// memoryless mean on the same topology; absent on the memoryless row itself.
struct ExperimentSummary {
  Family family = Family::clique;
  std::size_t n = 0;
  double p0 = 1.0;
  std::size_t runs = 0;
  Arm arm = Arm::memoryless;
  Summary stats;
  std::optional<double> tau;

  friend bool operator==(const ExperimentSummary& a, const ExperimentSummary& b) {
    return a.family == b.family && a.n == b.n && a.p0 == b.p0 && a.runs == b.runs && a.arm == b.arm &&
           a.stats.mean == b.stats.mean && a.stats.std == b.stats.std && a.stats.median == b.stats.median &&
           a.tau == b.tau;
  }
};

struct RawRun {
  Family family;
  std::size_t n;
  double p0;
  Arm arm;
  std::size_t run;
  std::uint64_t seed;
  std::uint64_t rounds;
};

// Memory-vs-memoryless comparison at one grid point.
struct ArmComparison {
  Family family;
  std::size_t n;
  double p0;
  TTestResult ttest;
};

struct ExperimentResult {
  std::vector<ExperimentSummary> summaries;
  std::vector<RawRun> raw;
  std::vector<ArmComparison> comparisons;
};

struct ExperimentOptions {
  std::size_t runs = 500;
  std::uint64_t seed = 0;
  BatchOptions batch;
  std::function<void(const ExperimentSummary&)> on_row;  // progress hook
};

// `count` evenly spaced values on [lo, hi], endpoints included.
inline std::vector<double> uniform_grid(std::size_t count, double lo, double hi) {
  if (count == 0) return {};
  if (count == 1) return {hi};
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

inline std::vector<double> default_p0_grid() { return uniform_grid(30, 0.1, 1.0); }

// Experiment sizes: 2^k - 1 for trees, odd squares for everything else.
inline std::vector<std::size_t> default_sizes(Family f, bool full_scale) {
  std::vector<std::size_t> out;
  if (f == Family::full_binary_tree) {
    for (std::size_t k = 3; k <= (full_scale ? 11u : 7u); ++k) out.push_back((std::size_t{1} << k) - 1);
  } else {
    for (std::size_t side = 3; side <= (full_scale ? 45u : 15u); side += 2) out.push_back(side * side);
  }
  return out;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

inline std::uint64_t arm_seed(std::uint64_t seed, Family f, std::size_t n, double p0, Arm arm) {
  std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(f));
  s = mix_seed(s, n);
  s = mix_seed(s, std::bit_cast<std::uint64_t>(p0));
  return mix_seed(s, static_cast<std::uint64_t>(arm));
}

// Welch test of memory against baseline; NaN fields when degenerate.
inline TTestResult compare_arms(const std::vector<double>& memory, const std::vector<double>& baseline) {
  try {
    return welch_ttest(memory, baseline);
  } catch (const invalid_input&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
}

struct ArmRun {
  ExperimentSummary summary;
  std::vector<double> rounds;
};

inline ArmRun run_arm(const WeightedDigraph& g, const TopologySpec& spec, double p0, Arm arm,
                      const ExperimentOptions& opt, std::vector<RawRun>& raw) {
  if (opt.runs < 2) throw invalid_input("experiments need at least 2 runs per arm");
  const RngSpec rng{arm_seed(opt.seed, spec.family, spec.n, p0, arm)};
  const auto records =
      run_batch(g, arm == Arm::memory ? one_layer_params(p0) : MemoryParams{}, uniform_random_initial(g.size(), 2),
                opt.runs, rng, opt.batch);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].cap_exceeded())
      raw.push_back({spec.family, spec.n, p0, arm, i, records[i].seed, *records[i].rounds});
  }
  ArmRun out;
  try {
    out.rounds = rounds_of(records);
  } catch (const invalid_input& e) {
    throw invalid_input(std::string(family_name(spec.family)) + " n=" + std::to_string(spec.n) +
                        " p0=" + std::to_string(p0) + " " + std::string(arm_name(arm)) + ": " + e.what());
  }
  out.summary = {spec.family, spec.n, p0, opt.runs, arm, summarize(out.rounds), std::nullopt};
  return out;
}

inline WeightedDigraph experiment_graph(const TopologySpec& spec) {
  auto g = make_topology(spec);
  if (!is_well_behaved(g))
    throw invalid_input(std::string(family_name(spec.family)) + " with n=" + std::to_string(spec.n) +
                        " is not well-behaved; the memoryless baseline would never reach consensus");
  return g;
}

}  // namespace detail

// Consensus time against p0 at a fixed topology. The p0 = 1 row is the
// memoryless baseline; every other p0 runs one-layer memory (p0, 1 - p0).
inline ExperimentResult experiment1(const TopologySpec& spec, const std::vector<double>& p0_grid,
                                    const ExperimentOptions& opt) {
  for (double p0 : p0_grid)
    if (!(p0 > 0.0 && p0 <= 1.0)) throw invalid_input("p0 values must lie in (0, 1]");
  const auto g = detail::experiment_graph(spec);
  ExperimentResult result;
  auto baseline = detail::run_arm(g, spec, 1.0, Arm::memoryless, opt, result.raw);
  result.summaries.push_back(baseline.summary);
  if (opt.on_row) opt.on_row(baseline.summary);
  for (double p0 : p0_grid) {
    if (p0 == 1.0) continue;
    auto memory = detail::run_arm(g, spec, p0, Arm::memory, opt, result.raw);
    memory.summary.tau = memory.summary.stats.mean / baseline.summary.stats.mean;
    result.comparisons.push_back({spec.family, spec.n, p0, detail::compare_arms(memory.rounds, baseline.rounds)});
    result.summaries.push_back(memory.summary);
    if (opt.on_row) opt.on_row(memory.summary);
  }
  return result;
}

// Consensus time against size at fixed p0: one memoryless and one memory arm
// per topology, each with independent random starts.
inline ExperimentResult experiment2(const std::vector<TopologySpec>& points, double p0, const ExperimentOptions& opt) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw invalid_input("experiment 2 needs p0 in (0, 1)");
  ExperimentResult result;
  for (const auto& spec : points) {
    const auto g = detail::experiment_graph(spec);
    auto baseline = detail::run_arm(g, spec, 1.0, Arm::memoryless, opt, result.raw);
    result.summaries.push_back(baseline.summary);
    if (opt.on_row) opt.on_row(baseline.summary);
    auto memory = detail::run_arm(g, spec, p0, Arm::memory, opt, result.raw);
    memory.summary.tau = memory.summary.stats.mean / baseline.summary.stats.mean;
    result.comparisons.push_back({spec.family, spec.n, p0, detail::compare_arms(memory.rounds, baseline.rounds)});
    result.summaries.push_back(memory.summary);
    if (opt.on_row) opt.on_row(memory.summary);
  }
  return result;
}

// --- CSV ---------------------------------------------------------------------

inline constexpr std::string_view kSummaryHeader = "family,n,p0,runs,arm,mean,std,median,tau";
inline constexpr std::string_view kRawHeader = "family,n,p0,arm,run,seed,rounds";

inline void write_summary_csv(std::ostream& os, const std::vector<ExperimentSummary>& rows) {
  os << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    os << family_name(r.family) << ',' << r.n << ',' << format_double(r.p0) << ',' << r.runs << ','
       << arm_name(r.arm) << ',' << format_double(r.stats.mean) << ',' << format_double(r.stats.std) << ','
       << format_double(r.stats.median) << ',' << (r.tau ? format_double(*r.tau) : "") << '\n';
  }
}

inline std::vector<ExperimentSummary> read_summary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kSummaryHeader) throw invalid_input("summary CSV header mismatch");
  std::vector<ExperimentSummary> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 9) throw invalid_input("summary CSV row has " + std::to_string(f.size()) + " fields: " + line);
    ExperimentSummary r;
    r.family = parse_family(f[0]);
    r.n = parse_uint(f[1]);
    r.p0 = parse_double(f[2]);
    r.runs = parse_uint(f[3]);
    r.arm = parse_arm(f[4]);
    r.stats = {parse_double(f[5]), parse_double(f[6]), parse_double(f[7])};
    if (!f[8].empty()) r.tau = parse_double(f[8]);
    rows.push_back(r);
  }
  return rows;
}

inline void write_raw_csv(std::ostream& os, const std::vector<RawRun>& raw) {
  os << kRawHeader << '\n';
  for (const auto& r : raw) {
    os << family_name(r.family) << ',' << r.n << ',' << format_double(r.p0) << ',' << arm_name(r.arm) << ','
       << r.run << ',' << r.seed << ',' << r.rounds << '\n';
  }
}

}  // namespace memcon
