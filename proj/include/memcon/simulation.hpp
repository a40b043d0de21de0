#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "memcon/graph.hpp"
#include "memcon/memory_graph.hpp"
#include "memcon/probability.hpp"
#include "memcon/random.hpp"

namespace memcon {

inline constexpr Colour kNoColour = std::numeric_limits<Colour>::max();
inline constexpr std::uint64_t kDefaultCap = 100'000'000;

// Walker/Vose alias tables for a family of discrete distributions stored
// back to back. One 64-bit draw per sample: the high half picks a column,
// the low half decides between the column and its alias.
class AliasTables {
 public:
  AliasTables() = default;

  void add(std::span<const double> weights) {
    const std::size_t d = weights.size();
    const std::size_t base = threshold_.size();
    offsets_.push_back(base);
    widths_.push_back(static_cast<std::uint32_t>(d));
    threshold_.resize(base + d);
    alias_.resize(base + d);

    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> scaled(d);
    std::vector<std::uint32_t> small, large;
    for (std::size_t k = 0; k < d; ++k) {
      scaled[k] = weights[k] / total * static_cast<double>(d);
      (scaled[k] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(k));
    }
    while (!small.empty() && !large.empty()) {
      auto s = small.back();
      small.pop_back();
      auto l = large.back();
      threshold_[base + s] = to_threshold(scaled[s]);
      alias_[base + s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto k : large) set_certain(base + k, k);
    for (auto k : small) set_certain(base + k, k);  // round-off leftovers
  }

  std::size_t size() const { return offsets_.size(); }
  std::size_t width(std::size_t table) const { return widths_[table]; }

  // Index within the table's support.
  std::uint32_t sample(std::size_t table, std::uint64_t draw) const {
    const std::size_t base = offsets_[table];
    const auto col = uniform_below(draw, widths_[table]);
    return (draw & 0xffffffffULL) < threshold_[base + col] ? col : alias_[base + col];
  }

 private:
  static std::uint64_t to_threshold(double p) {
    return static_cast<std::uint64_t>(std::clamp(p, 0.0, 1.0) * 4294967296.0);
  }
  void set_certain(std::size_t slot, std::uint32_t k) {
    threshold_[slot] = 4294967296ULL;
    alias_[slot] = k;
  }

  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> widths_;
  std::vector<std::uint64_t> threshold_;
  std::vector<std::uint32_t> alias_;
};

// Precomputed samplers for the copy rule of one (graph, memory parameters)
// pair. Immutable and shareable across threads.
class CopyRule {
 public:
  CopyRule(const WeightedDigraph& g, const MemoryParams& p) : graph_(&g), m_(p.m()) {
    for (NodeId v = 0; v < g.size(); ++v) neighbours_.add(g.weights(v));
    layers_.add(p.probs());
  }

  const WeightedDigraph& graph() const { return *graph_; }
  std::size_t size() const { return graph_->size(); }
  std::size_t m() const { return m_; }

  NodeId sample_neighbour(NodeId v, std::uint64_t draw) const {
    return graph_->targets(v)[neighbours_.sample(v, draw)];
  }
  std::size_t sample_layer(std::uint64_t draw) const { return m_ == 0 ? 0 : layers_.sample(0, draw); }

 private:
  const WeightedDigraph* graph_;
  std::size_t m_;
  AliasTables neighbours_;
  AliasTables layers_;
};

// The last m+1 configurations of a running process. Backed by a ring of
// m+2 colour arrays so a step writes into the spare slot without copying.
class MemoryProcessState {
 public:
  MemoryProcessState(const HistoryStack& oldest_first, std::uint64_t round)
      : n_(oldest_first.empty() ? 0 : oldest_first.front().size()),
        depth_(oldest_first.size()),
        buffers_((depth_ + 1) * n_),
        mono_(depth_ + 1, kNoColour),
        round_(round) {
    if (depth_ == 0) throw invalid_input("history needs at least one configuration");
    for (std::size_t i = 0; i < depth_; ++i) {
      const auto& s = oldest_first[depth_ - 1 - i];
      if (s.size() != n_) throw invalid_input("history configurations differ in length");
      std::copy(s.begin(), s.end(), slot(i).begin());
      mono_[index(i)] = monochrome(slot(i));
    }
  }

  // Early memory start: m+1 copies of s, round counter at m.
  static MemoryProcessState early(const Configuration& s, std::size_t m) {
    return MemoryProcessState(early_history(s, m), m);
  }

  std::size_t size() const { return n_; }
  std::size_t m() const { return depth_ - 1; }
  std::uint64_t round() const { return round_; }

  // Configuration of round t - i.
  std::span<const Colour> history(std::size_t i) const { return {buffers_.data() + index(i) * n_, n_}; }

  HistoryStack snapshot() const {
    HistoryStack out;
    for (std::size_t i = depth_; i-- > 0;) out.emplace_back(history(i).begin(), history(i).end());
    return out;
  }

  // Colour c when every remembered configuration is all-c, kNoColour otherwise.
  Colour stable_consensus() const {
    const Colour c = mono_[index(0)];
    if (c == kNoColour) return kNoColour;
    for (std::size_t i = 1; i < depth_; ++i)
      if (mono_[index(i)] != c) return kNoColour;
    return c;
  }

  // One synchronous round: every node picks a round t-i with probability p_i,
  // then an out-neighbour by weight, and copies that neighbour's colour at t-i.
  void step(const CopyRule& rule, Engine& rng) {
    const std::size_t spare = (head_ + depth_) % (depth_ + 1);
    Colour* next = buffers_.data() + spare * n_;
    layer_ptr_.resize(depth_);
    for (std::size_t i = 0; i < depth_; ++i) layer_ptr_[i] = buffers_.data() + index(i) * n_;
    const Colour* present = layer_ptr_[0];
    const bool memoryless = depth_ == 1;
    for (NodeId v = 0; v < n_; ++v) {
      const Colour* source = memoryless ? present : layer_ptr_[rule.sample_layer(rng())];
      next[v] = source[rule.sample_neighbour(v, rng())];
    }
    mono_[spare] = monochrome({next, n_});
    head_ = spare;
    ++round_;
  }

 private:
  std::size_t index(std::size_t i) const { return (head_ + i) % (depth_ + 1); }
  std::span<Colour> slot(std::size_t i) { return {buffers_.data() + index(i) * n_, n_}; }

  static Colour monochrome(std::span<const Colour> s) {
    if (s.empty()) return kNoColour;
    for (Colour c : s)
      if (c != s.front()) return kNoColour;
    return s.front();
  }

  std::size_t n_;
  std::size_t depth_;
  std::vector<Colour> buffers_;
  std::vector<Colour> mono_;
  std::size_t head_ = 0;
  std::uint64_t round_;
  std::vector<const Colour*> layer_ptr_;
};

// Functional form of one round; builds the samplers on every call, so hot
// loops should hold a CopyRule and call MemoryProcessState::step instead.
inline MemoryProcessState step_memory(const WeightedDigraph& g, const MemoryParams& p, MemoryProcessState state,
                                      Engine& rng) {
  if (state.m() != p.m()) throw invalid_input("state depth does not match m");
  if (state.size() != g.size()) throw invalid_input("state size does not match graph");
  state.step(CopyRule(g, p), rng);
  return state;
}

inline std::optional<Colour> is_stable_consensus(const MemoryProcessState& state) {
  Colour c = state.stable_consensus();
  if (c == kNoColour) return std::nullopt;
  return c;
}

struct RunRecord {
  std::optional<Colour> winner;    // empty when the cap was hit
  std::optional<std::uint64_t> rounds;  // empty when the cap was hit
  std::uint64_t seed = 0;

  bool cap_exceeded() const { return !winner.has_value(); }
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Runs the early memory process from s until stable consensus or `cap` rounds.
// Rounds count step invocations; a monochromatic start reports 0.
inline RunRecord run_process(const CopyRule& rule, const Configuration& s, std::uint64_t cap, Engine& rng,
                             std::uint64_t seed = 0) {
  if (cap == 0) throw invalid_input("cap must be positive");
  if (s.size() != rule.size()) throw invalid_input("initial configuration does not match graph size");
  auto state = MemoryProcessState::early(s, rule.m());
  for (std::uint64_t steps = 0;; ++steps) {
    if (Colour c = state.stable_consensus(); c != kNoColour) return {c, steps, seed};
    if (steps == cap) return {std::nullopt, std::nullopt, seed};
    state.step(rule, rng);
  }
}

inline RunRecord run_process(const WeightedDigraph& g, const MemoryParams& p, const Configuration& s,
                             std::uint64_t cap, std::uint64_t seed) {
  Engine rng(seed);
  return run_process(CopyRule(g, p), s, cap, rng, seed);
}

// Produces the starting configuration of a run from that run's engine.
using InitialSampler = std::function<Configuration(Engine&)>;

inline InitialSampler fixed_initial(Configuration s) {
  return [s = std::move(s)](Engine&) { return s; };
}

// Each node independently takes one of `colours` colours uniformly.
inline InitialSampler uniform_random_initial(std::size_t n, std::uint32_t colours = 2) {
  return [n, colours](Engine& rng) {
    Configuration s(n);
    for (auto& c : s) c = uniform_below(rng(), colours);
    return s;
  };
}

inline std::size_t default_workers() {
  if (const char* env = std::getenv("MEMCON_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct BatchOptions {
  std::uint64_t cap = kDefaultCap;
  std::size_t workers = 0;  // 0: default_workers()
};

// `runs` independent seeded runs; run i uses seed rng.run_seed(i) both to draw
// its initial configuration and to drive its rounds. Output is ordered by run
// index and does not depend on the worker count.
inline std::vector<RunRecord> run_batch(const WeightedDigraph& g, const MemoryParams& p, const InitialSampler& initial,
                                        std::size_t runs, const RngSpec& rng, const BatchOptions& opt = {}) {
  if (runs == 0) throw invalid_input("runs must be positive");
  const CopyRule rule(g, p);
  std::vector<RunRecord> out(runs);
  auto one = [&](std::size_t i) {
    const std::uint64_t seed = rng.run_seed(i);
    Engine engine(seed);
    Configuration s = initial(engine);
    out[i] = run_process(rule, s, opt.cap, engine, seed);
  };
  const std::size_t workers = std::min(runs, opt.workers == 0 ? default_workers() : opt.workers);
  if (workers <= 1) {
    for (std::size_t i = 0; i < runs; ++i) one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < runs; i = next++) one(i);
        } catch (...) {
          errors[w] = std::current_exception();
          next = runs;
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace memcon
