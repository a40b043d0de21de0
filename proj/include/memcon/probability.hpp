#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "memcon/graph.hpp"
#include "memcon/memory_graph.hpp"
#include "memcon/stationary.hpp"
#include "memcon/structure.hpp"

namespace memcon {

using Colour = std::uint32_t;

// Colour of every node at one round.
using Configuration = std::vector<Colour>;

// Configurations s_0, ..., s_m, oldest first; s_m is the present.
using HistoryStack = std::vector<Configuration>;

// P(colour c wins), indexed by colour id.
template <Weight W>
using WinDistribution = std::vector<W>;

inline std::size_t colour_count(const Configuration& s) {
  Colour top = 0;
  for (Colour c : s) top = std::max(top, c);
  return std::max<std::size_t>(2, static_cast<std::size_t>(top) + 1);
}

inline std::size_t colour_count(const HistoryStack& h) {
  std::size_t k = 2;
  for (const auto& s : h) k = std::max(k, colour_count(s));
  return k;
}

// Memory-graph configuration: layer i holds s_{m-i}.
inline Configuration stack_history(const HistoryStack& h) {
  Configuration out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& s = h[h.size() - 1 - i];
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

// History of m+1 copies of s (the early memory convention).
inline HistoryStack early_history(const Configuration& s, std::size_t m) { return HistoryStack(m + 1, s); }

// Winning probability of each colour in a memoryless process:
// the total influence of the nodes holding it.
template <Weight W>
WinDistribution<W> winprob_memoryless(const BasicDigraph<W>& g, const Influence<W>& mu, const Configuration& s,
                                      std::size_t colours = 0) {
  if (s.size() != g.size() || mu.size() != g.size())
    throw invalid_input("configuration has " + std::to_string(s.size()) + " entries, graph has " +
                        std::to_string(g.size()) + " nodes");
  if (!is_strongly_connected(g)) throw invalid_input("winning probabilities need a strongly connected graph");
  if (!is_well_behaved(g))
    throw invalid_input("graph is not well-behaved (periodic); memoryless winning probabilities are undefined");
  WinDistribution<W> out(std::max(colours, colour_count(s)), W(0));
  for (std::size_t v = 0; v < s.size(); ++v) out[s[v]] += mu[v];
  return out;
}

// Winning probability of each colour in an m-memory process with history h:
// sum over layers of (alpha_i / sigma) times the influence holding c in s_{m-i}.
template <Weight W>
WinDistribution<W> winprob_memory(const BasicDigraph<W>& g, const Influence<W>& mu, const BasicMemoryParams<W>& p,
                                  const HistoryStack& h, std::size_t colours = 0) {
  if (h.size() != p.m() + 1)
    throw invalid_input("history has " + std::to_string(h.size()) + " configurations, expected m+1 = " +
                        std::to_string(p.m() + 1));
  for (const auto& s : h) {
    if (s.size() != g.size())
      throw invalid_input("history configuration has " + std::to_string(s.size()) + " entries, graph has " +
                          std::to_string(g.size()) + " nodes");
  }
  if (mu.size() != g.size()) throw invalid_input("influence vector length does not match graph");
  if (!is_strongly_connected(g)) throw invalid_input("winning probabilities need a strongly connected graph");
  if (p.m() == 0 && !is_well_behaved(g))
    throw invalid_input("graph is not well-behaved (periodic); memoryless winning probabilities are undefined");

  const auto layer = layer_weights(p).normalized();
  WinDistribution<W> out(std::max(colours, colour_count(h)), W(0));
  const std::size_t m = p.m();
  for (std::size_t i = 0; i <= m; ++i) {
    const auto& s = h[m - i];
    std::vector<W> mass(out.size(), W(0));
    for (std::size_t v = 0; v < s.size(); ++v) mass[s[v]] += mu[v];
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += layer[i] * mass[c];
  }
  return out;
}

template <Weight W>
struct EquivalenceResult {
  WinDistribution<W> memoryless;
  WinDistribution<W> early_memory;
  double max_abs_diff;
};

// Compares the memoryless process from s with the early memory process from s.
template <Weight W>
EquivalenceResult<W> early_memory_equivalence_check(const BasicDigraph<W>& g, const Influence<W>& mu,
                                                    const BasicMemoryParams<W>& p, const Configuration& s) {
  auto k = colour_count(s);
  EquivalenceResult<W> r{winprob_memoryless(g, mu, s, k), winprob_memory(g, mu, p, early_history(s, p.m()), k), 0.0};
  for (std::size_t c = 0; c < k; ++c)
    r.max_abs_diff = std::max(r.max_abs_diff, std::abs(to_double(r.memoryless[c]) - to_double(r.early_memory[c])));
  return r;
}

}  // namespace memcon
