#pragma once

// Command-line front end. dispatch() is kept separate from main() so tests
// can drive every subcommand in-process with captured streams.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "memcon/memcon.hpp"

namespace memcon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInternal = 2;
inline constexpr std::size_t kMaxMemoryFlags = 10;  // --p0 .. --p9

struct GraphSource {
  std::string file;
  std::string family;
  std::size_t n = 0;
  std::vector<std::size_t> parts;
  std::vector<std::size_t> sides;

  void attach(CLI::App& cmd) {
    auto* g = cmd.add_option("--graph", file, "graph file");
    auto* f = cmd.add_option("--family", family, "topology family (clique, cycle, biclique, full_binary_tree, torus_grid)");
    cmd.add_option("--n", n, "node count for --family");
    cmd.add_option("--parts", parts, "biclique partition sizes a,b")->delimiter(',')->expected(2);
    cmd.add_option("--sides", sides, "torus side lengths rows,cols")->delimiter(',')->expected(2);
    g->excludes(f);
  }

  TopologySpec spec() const {
    TopologySpec s{parse_family(family), n, std::nullopt, std::nullopt};
    if (!parts.empty()) s.parts = std::pair{parts[0], parts[1]};
    if (!sides.empty()) {
      s.sides = std::pair{sides[0], sides[1]};
      if (s.n == 0) s.n = sides[0] * sides[1];
    }
    if (s.n == 0 && !parts.empty()) s.n = parts[0] + parts[1];
    return s;
  }

  GraphFile load() const {
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw invalid_input("cannot open graph file '" + file + "'");
      return read_graph(in);
    }
    if (family.empty()) throw invalid_input("give either --graph FILE or --family NAME --n N");
    GraphFile out;
    auto s = spec();
    out.exact = make_topology<Rational>(s);
    out.graph = out.exact->to_double();
    return out;
  }

  std::string describe() const {
    if (!file.empty()) return "--graph " + file;
    std::string d = "--family " + family + " --n " + std::to_string(spec().n);
    if (!parts.empty()) d += " --parts " + std::to_string(parts[0]) + "," + std::to_string(parts[1]);
    if (!sides.empty()) d += " --sides " + std::to_string(sides[0]) + "," + std::to_string(sides[1]);
    return d;
  }
};

// Memory probabilities from --m and --p0..--pm (one missing entry is filled
// with the remainder) or from a comma list --p.
struct MemorySource {
  std::size_t m = 0;
  std::array<std::string, kMaxMemoryFlags> flags;
  std::vector<std::string> list;

  void attach(CLI::App& cmd) {
    cmd.add_option("--m", m, "memory depth m")->capture_default_str();
    for (std::size_t i = 0; i < kMaxMemoryFlags; ++i)
      cmd.add_option("--p" + std::to_string(i), flags[i], "probability of copying from round t-" + std::to_string(i));
    cmd.add_option("--p", list, "comma separated p0,...,pm")->delimiter(',');
  }

  std::vector<std::string> texts() const {
    if (!list.empty()) {
      for (const auto& f : flags)
        if (!f.empty()) throw invalid_input("use either --p or --p0..--pm, not both");
      return list;
    }
    std::size_t depth = m;
    for (std::size_t i = 0; i < kMaxMemoryFlags; ++i)
      if (!flags[i].empty()) depth = std::max(depth, i);
    std::vector<std::string> out(flags.begin(), flags.begin() + static_cast<std::ptrdiff_t>(depth + 1));
    std::size_t missing = 0;
    for (const auto& t : out) missing += t.empty() ? 1 : 0;
    if (depth == 0 && missing == 1) out[0] = "1";
    else if (missing > 1) throw invalid_input("memory depth " + std::to_string(depth) + " needs --p0..--p" +
                                              std::to_string(depth) + " (at most one may be left out)");
    if (missing == 1 && depth > 0) {
      bool exact = true;
      for (const auto& t : out)
        if (!t.empty()) exact = exact && Rational::looks_rational(t);
      std::string rest;
      if (exact) {
        Rational r(1);
        for (const auto& t : out)
          if (!t.empty()) r -= Rational::parse(t);
        rest = r.str();
      } else {
        double r = 1.0;
        for (const auto& t : out)
          if (!t.empty()) r -= parse_double(t);
        rest = format_double(r);
      }
      for (auto& t : out)
        if (t.empty()) t = rest;
    }
    return out;
  }

  std::optional<BasicMemoryParams<Rational>> exact() const {
    auto t = texts();
    std::vector<Rational> probs;
    for (const auto& s : t) {
      if (!Rational::looks_rational(s)) return std::nullopt;
      probs.push_back(Rational::parse(s));
    }
    return BasicMemoryParams<Rational>(std::move(probs));
  }

  MemoryParams params() const {
    if (auto e = exact()) return e->to_double();
    std::vector<double> probs;
    for (const auto& s : texts()) probs.push_back(parse_double(s));
    return MemoryParams(std::move(probs));
  }

  std::string describe() const {
    auto t = texts();
    std::string d = "--m " + std::to_string(t.size() - 1);
    for (std::size_t i = 0; i < t.size(); ++i) d += " --p" + std::to_string(i) + " " + t[i];
    return d;
  }
};

inline std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

inline std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  for (auto part : split_csv_line(s)) out.emplace_back(part);
  return out;
}

inline HistoryStack load_history(const std::string& path, const std::vector<std::string>& palette) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open configuration file '" + path + "'");
  return read_history(in, palette);
}

// Single-line record of every resolved setting, written to the diagnostic stream.
inline void effective(std::ostream& err, const std::string& line) { err << "# effective: memcon " << line << '\n'; }

inline int run_gen(GraphSource& src, std::ostream& out, std::ostream& err) {
  if (src.family.empty()) throw invalid_input("gen needs --family and --n");
  auto g = make_topology<Rational>(src.spec());
  effective(err, "gen " + src.describe());
  write_graph(out, g);
  return kExitOk;
}

inline int run_check(GraphSource& src, const std::string& format, std::ostream& out, std::ostream& err) {
  auto file = src.load();
  effective(err, "check " + src.describe() + " --format " + format);
  const auto& g = file.graph;
  const bool strong = is_strongly_connected(g);
  std::optional<std::size_t> period;
  if (strong) period = graph_period(g);
  const bool well = period && *period == 1;
  if (format == "json") {
    nlohmann::ordered_json j;
    j["nodes"] = g.size();
    j["edges"] = g.edge_count();
    j["strongly_connected"] = strong;
    j["period"] = period ? nlohmann::ordered_json(*period) : nlohmann::ordered_json(nullptr);
    j["well_behaved"] = well;
    out << j.dump() << '\n';
  } else {
    out << "nodes: " << g.size() << '\n'
        << "edges: " << g.edge_count() << '\n'
        << "strongly_connected: " << (strong ? "true" : "false") << '\n'
        << "period: " << (period ? std::to_string(*period) : "none") << '\n'
        << "well_behaved: " << (well ? "true" : "false") << '\n';
  }
  return kExitOk;
}

inline int run_stationary(GraphSource& src, const std::string& format, bool exact, double tolerance,
                          std::ostream& out, std::ostream& err) {
  auto file = src.load();
  effective(err, "stationary " + src.describe() + " --format " + format + (exact ? " --exact" : "") +
                     " --tolerance " + format_double(tolerance));
  std::vector<std::string> text;
  if (exact) {
    if (!file.exact) throw invalid_input("--exact needs every weight written as an integer or fraction");
    for (const auto& x : stationary_distribution(*file.exact)) text.push_back(x.str());
  } else {
    StationaryOptions opt;
    opt.tolerance = tolerance;
    for (double x : stationary_distribution(file.graph, opt)) text.push_back(format_double(x));
  }
  auto name = [&](std::size_t v) { return file.labels.empty() ? std::to_string(v) : file.labels[v]; };
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < text.size(); ++v) {
      if (exact) j[name(v)] = text[v];
      else j[name(v)] = parse_double(text[v]);
    }
    out << j.dump() << '\n';
  } else {
    out << "node,influence\n";
    for (std::size_t v = 0; v < text.size(); ++v) out << name(v) << ',' << text[v] << '\n';
  }
  return kExitOk;
}

inline int run_winprob(GraphSource& src, MemorySource& mem, const std::string& config, const std::string& colours,
                       bool exact, std::ostream& out, std::ostream& err) {
  auto file = src.load();
  auto palette = split_names(colours);
  auto history = load_history(config, palette);
  const std::size_t m = mem.texts().size() - 1;
  if (history.size() == 1 && m > 0) history = early_history(history.front(), m);
  effective(err, "winprob " + src.describe() + " --config " + config + " " + mem.describe() +
                     (colours.empty() ? "" : " --colours " + colours) + (exact ? " --exact" : ""));
  const std::size_t k = std::max(palette.size(), colour_count(history));
  auto key = [&](std::size_t c) { return c < palette.size() ? palette[c] : std::to_string(c); };
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (exact) {
    auto p = mem.exact();
    if (!file.exact || !p) throw invalid_input("--exact needs fractional weights and fractional memory probabilities");
    auto mu = stationary_distribution(*file.exact);
    auto w = winprob_memory(*file.exact, mu, *p, history, k);
    for (std::size_t c = 0; c < w.size(); ++c) j[key(c)] = w[c].str();
  } else {
    auto p = mem.params();
    auto mu = stationary_distribution(file.graph);
    auto w = winprob_memory(file.graph, mu, p, history, k);
    for (std::size_t c = 0; c < w.size(); ++c) j[key(c)] = w[c];
  }
  out << j.dump() << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::size_t runs = 1;
  std::uint64_t cap = kDefaultCap;
  std::optional<std::uint64_t> seed;
  std::string init = "random";
  std::string config;
  std::uint32_t colours = 2;
  std::size_t workers = 0;
};

inline int run_simulate(GraphSource& src, MemorySource& mem, SimulateArgs& a, std::ostream& out, std::ostream& err) {
  auto file = src.load();
  const auto p = mem.params();
  const std::uint64_t seed = a.seed.value_or(fresh_seed());
  InitialSampler initial;
  if (a.init == "random") {
    if (a.colours < 2) throw invalid_input("--colours must be at least 2");
    initial = uniform_random_initial(file.graph.size(), a.colours);
  } else if (a.init == "file") {
    if (a.config.empty()) throw invalid_input("--init file needs --config FILE");
    auto h = load_history(a.config, {});
    if (h.size() != 1) throw invalid_input("simulate starts from a single configuration (early memory)");
    if (h.front().size() != file.graph.size()) throw invalid_input("configuration does not match graph size");
    initial = fixed_initial(h.front());
  } else {
    throw invalid_input("--init must be 'random' or 'file'");
  }
  std::string line = "simulate " + src.describe() + " " + mem.describe() + " --runs " + std::to_string(a.runs) +
                     " --cap " + std::to_string(a.cap) + " --seed " + std::to_string(seed) + " --init " + a.init;
  line += a.init == "file" ? " --config " + a.config : " --colours " + std::to_string(a.colours);
  effective(err, line);
  BatchOptions opt;
  opt.cap = a.cap;
  opt.workers = a.workers;
  auto records = run_batch(file.graph, p, initial, a.runs, RngSpec{seed}, opt);
  out << "run,seed,winner,rounds\n";
  std::size_t capped = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << i << ',' << r.seed << ',';
    if (r.cap_exceeded()) {
      ++capped;
      out << "NONE,CAP_EXCEEDED\n";
    } else {
      out << *r.winner << ',' << *r.rounds << '\n';
    }
  }
  if (capped > 0) err << "# " << capped << " of " << records.size() << " runs hit the cap\n";
  return kExitOk;
}

struct ExperimentArgs {
  std::vector<std::string> families;
  std::vector<std::size_t> sizes;
  std::vector<double> p0_grid;
  std::size_t grid_points = 30;
  double p0 = 0.9;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::uint64_t cap = kDefaultCap;
  bool full_scale = false;
  std::string out_path;
  std::string raw_path;
  std::size_t workers = 0;
};

inline std::vector<Family> families_of(const ExperimentArgs& a) {
  std::vector<Family> out;
  if (a.families.empty()) return {kAllFamilies.begin(), kAllFamilies.end()};
  for (const auto& f : a.families) out.push_back(parse_family(f));
  return out;
}

inline std::string join_sizes(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

inline void emit_experiment(const ExperimentResult& r, const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  if (a.out_path.empty()) {
    write_summary_csv(out, r.summaries);
  } else {
    std::ofstream f(a.out_path);
    if (!f) throw invalid_input("cannot write '" + a.out_path + "'");
    write_summary_csv(f, r.summaries);
  }
  if (!a.raw_path.empty()) {
    std::ofstream f(a.raw_path);
    if (!f) throw invalid_input("cannot write '" + a.raw_path + "'");
    write_raw_csv(f, r.raw);
  }
  for (const auto& c : r.comparisons) {
    err << "# welch " << family_name(c.family) << " n=" << c.n << " p0=" << format_double(c.p0)
        << " t=" << format_double(c.ttest.t_statistic) << " df=" << format_double(c.ttest.df)
        << " p=" << format_double(c.ttest.p_value) << '\n';
  }
}

inline ExperimentOptions experiment_options(const ExperimentArgs& a, std::uint64_t seed, std::size_t runs,
                                            std::ostream& err) {
  ExperimentOptions opt;
  opt.runs = runs;
  opt.seed = seed;
  opt.batch.cap = a.cap;
  opt.batch.workers = a.workers;
  opt.on_row = [&err](const ExperimentSummary& s) {
    err << "# " << family_name(s.family) << " n=" << s.n << " p0=" << format_double(s.p0) << " " << arm_name(s.arm)
        << " mean=" << format_double(s.stats.mean) << (s.tau ? " tau=" + format_double(*s.tau) : "") << '\n';
  };
  return opt;
}

inline std::string common_experiment_flags(const ExperimentArgs& a, std::size_t runs, std::uint64_t seed) {
  std::string s = " --runs " + std::to_string(runs) + " --seed " + std::to_string(seed) + " --cap " +
                  std::to_string(a.cap);
  if (a.full_scale) s += " --full-scale";
  if (!a.out_path.empty()) s += " --out " + a.out_path;
  if (!a.raw_path.empty()) s += " --raw " + a.raw_path;
  return s;
}

inline int run_exp1(ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  const auto families = families_of(a);
  const std::size_t runs = a.runs.value_or(a.full_scale ? 4000 : 500);
  const std::uint64_t seed = a.seed.value_or(fresh_seed());
  auto grid = a.p0_grid.empty() ? uniform_grid(a.grid_points, 0.1, 1.0) : a.p0_grid;
  std::string grid_text;
  for (std::size_t i = 0; i < grid.size(); ++i) grid_text += (i ? "," : "") + format_double(grid[i]);
  std::vector<TopologySpec> specs;
  for (Family f : families) {
    std::size_t n = a.sizes.empty() ? (a.full_scale ? 1023 : (f == Family::full_binary_tree ? 63 : 49)) : a.sizes[0];
    specs.push_back({f, n, std::nullopt, std::nullopt});
  }
  std::string fams, ns;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    fams += (i ? "," : "") + std::string(family_name(specs[i].family));
    ns += (i ? "," : "") + std::to_string(specs[i].n);
  }
  effective(err, "exp1 --family " + fams + " --n " + ns + " --p0-grid " + grid_text + common_experiment_flags(a, runs, seed));
  if (a.sizes.size() > 1 && a.sizes.size() != specs.size())
    throw invalid_input("exp1 takes one --n, or one per family");
  if (a.sizes.size() > 1)
    for (std::size_t i = 0; i < specs.size(); ++i) specs[i].n = a.sizes[i];
  for (const auto& s : specs) validate(s);
  auto opt = experiment_options(a, seed, runs, err);
  ExperimentResult all;
  for (const auto& s : specs) {
    auto r = experiment1(s, grid, opt);
    all.summaries.insert(all.summaries.end(), r.summaries.begin(), r.summaries.end());
    all.raw.insert(all.raw.end(), r.raw.begin(), r.raw.end());
    all.comparisons.insert(all.comparisons.end(), r.comparisons.begin(), r.comparisons.end());
  }
  emit_experiment(all, a, out, err);
  return kExitOk;
}

inline int run_exp2(ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  const auto families = families_of(a);
  const std::size_t runs = a.runs.value_or(a.full_scale ? 10000 : 500);
  const std::uint64_t seed = a.seed.value_or(fresh_seed());
  std::vector<TopologySpec> specs;
  std::string fams;
  for (Family f : families) {
    fams += (fams.empty() ? "" : ",") + std::string(family_name(f));
    auto sizes = default_sizes(f, a.full_scale);
    if (!a.sizes.empty()) {
      sizes.clear();
      for (std::size_t n : a.sizes) {
        const bool tree_size = ((n + 1) & n) == 0;
        // a shared size list only applies where the family admits the size
        if ((f == Family::full_binary_tree) == tree_size) sizes.push_back(n);
      }
    }
    for (std::size_t n : sizes) specs.push_back({f, n, std::nullopt, std::nullopt});
  }
  std::string line = "exp2 --family " + fams + " --p0 " + format_double(a.p0);
  if (!a.sizes.empty()) line += " --sizes " + join_sizes(a.sizes);
  effective(err, line + common_experiment_flags(a, runs, seed));
  for (const auto& s : specs) validate(s);
  auto r = experiment2(specs, a.p0, experiment_options(a, seed, runs, err));
  emit_experiment(r, a, out, err);
  return kExitOk;
}

inline int run_dump(GraphSource& src, MemorySource& mem, std::ostream& out, std::ostream& err) {
  auto file = src.load();
  effective(err, "dump-memory-graph " + src.describe() + " " + mem.describe());
  auto exact_p = mem.exact();
  if (file.exact && exact_p) {
    auto mg = build_memory_graph(*file.exact, *exact_p);
    std::vector<std::string> labels;
    for (NodeId v = 0; v < mg.graph().size(); ++v) labels.push_back(mg.label(v));
    write_graph(out, mg.graph(), labels);
  } else {
    auto mg = build_memory_graph(file.graph, mem.params());
    std::vector<std::string> labels;
    for (NodeId v = 0; v < mg.graph().size(); ++v) labels.push_back(mg.label(v));
    write_graph(out, mg.graph(), labels);
  }
  return kExitOk;
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memory consensus processes on weighted digraphs", "memcon"};
  app.require_subcommand(1);

  GraphSource src;
  MemorySource mem;
  std::string format = "text";
  bool exact = false;
  double tolerance = 1e-12;
  std::string config, colours;
  SimulateArgs sim;
  ExperimentArgs exp;

  auto* gen = app.add_subcommand("gen", "emit a topology in the graph file format");
  src.attach(*gen);

  auto* check = app.add_subcommand("check", "strong connectivity, period and well-behavedness");
  src.attach(*check);
  check->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* stat = app.add_subcommand("stationary", "node influences (stationary distribution)");
  src.attach(*stat);
  stat->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  stat->add_flag("--exact", exact, "rational arithmetic (fractional weights only)");
  stat->add_option("--tolerance", tolerance, "residual tolerance");

  auto* win = app.add_subcommand("winprob", "exact winning probability of each colour");
  src.attach(*win);
  mem.attach(*win);
  win->add_option("--config", config, "configuration file (layers oldest first)")->required();
  win->add_option("--colours", colours, "comma separated colour names for ids 0,1,...");
  win->add_flag("--exact", exact, "rational arithmetic");

  auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo runs");
  src.attach(*simulate);
  mem.attach(*simulate);
  simulate->add_option("--runs", sim.runs, "number of runs")->capture_default_str();
  simulate->add_option("--cap", sim.cap, "round cap per run")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "master seed (random when omitted)");
  simulate->add_option("--init", sim.init, "random or file")->check(CLI::IsMember({"random", "file"}));
  simulate->add_option("--config", sim.config, "initial configuration for --init file");
  simulate->add_option("--colours", sim.colours, "colour count for --init random")->capture_default_str();
  simulate->add_option("--workers", sim.workers, "worker threads (default MEMCON_WORKERS or all cores)");

  auto attach_exp = [&](CLI::App* cmd) {
    cmd->add_option("--family", exp.families, "topology families (default: all five)")->delimiter(',');
    cmd->add_option("--runs", exp.runs, "runs per arm");
    cmd->add_option("--seed", exp.seed, "master seed (random when omitted)");
    cmd->add_option("--cap", exp.cap, "round cap per run")->capture_default_str();
    cmd->add_flag("--full-scale", exp.full_scale, "full-size graphs and run counts");
    cmd->add_option("--out", exp.out_path, "summary CSV path (default stdout)");
    cmd->add_option("--raw", exp.raw_path, "per-run rounds CSV path");
    cmd->add_option("--workers", exp.workers, "worker threads");
  };
  auto* exp1 = app.add_subcommand("exp1", "consensus time ratio against p0 at fixed n");
  attach_exp(exp1);
  exp1->add_option("--n", exp.sizes, "node count (one, or one per family)")->delimiter(',');
  exp1->add_option("--p0-grid", exp.p0_grid, "explicit p0 values")->delimiter(',');
  exp1->add_option("--grid-points", exp.grid_points, "number of p0 values on [0.1, 1]")->capture_default_str();

  auto* exp2 = app.add_subcommand("exp2", "consensus time ratio against n at fixed p0");
  attach_exp(exp2);
  exp2->add_option("--sizes", exp.sizes, "node counts (default: per-family grid)")->delimiter(',');
  exp2->add_option("--p0", exp.p0, "probability of copying the present")->capture_default_str();

  auto* dump = app.add_subcommand("dump-memory-graph", "emit the layered memory graph");
  src.attach(*dump);
  mem.attach(*dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (gen->parsed()) return run_gen(src, out, err);
    if (check->parsed()) return run_check(src, format, out, err);
    if (stat->parsed()) return run_stationary(src, format == "text" ? "csv" : format, exact, tolerance, out, err);
    if (win->parsed()) return run_winprob(src, mem, config, colours, exact, out, err);
    if (simulate->parsed()) return run_simulate(src, mem, sim, out, err);
    if (exp1->parsed()) return run_exp1(exp, out, err);
    if (exp2->parsed()) return run_exp2(exp, out, err);
    if (dump->parsed()) return run_dump(src, mem, out, err);
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInvalid;
}

}  // namespace memcon::cli
