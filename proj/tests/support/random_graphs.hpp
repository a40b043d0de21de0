#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "memcon/memcon.hpp"
#include "oracle/configuration_chain.hpp"

namespace testkit {

using memcon::Rational;

// Strongly connected digraph: a random Hamiltonian cycle plus extra arcs,
// small-integer weights normalised per row. Self-loops only if allowed.
inline memcon::ExactDigraph random_strong_graph(std::mt19937_64& rng, std::size_t n, double extra = 0.3,
                                                bool loops = true) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::set<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) adj[perm[i]].insert(perm[(i + 1) % n]);
  std::bernoulli_distribution coin(extra);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u)
      if ((u != v || loops) && coin(rng)) adj[v].insert(u);
  std::uniform_int_distribution<int> wdist(1, 4);
  std::vector<memcon::Edge<Rational>> edges;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<int> w;
    for (std::size_t k = 0; k < adj[v].size(); ++k) w.push_back(wdist(rng));
    const int total = std::accumulate(w.begin(), w.end(), 0);
    std::size_t k = 0;
    for (std::size_t u : adj[v])
      edges.push_back({static_cast<memcon::NodeId>(v), static_cast<memcon::NodeId>(u), Rational(w[k++], total)});
  }
  return memcon::ExactDigraph(n, std::move(edges));
}

inline std::vector<std::vector<std::size_t>> adjacency(const memcon::WeightedDigraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.size());
  for (memcon::NodeId v = 0; v < g.size(); ++v)
    for (auto u : g.targets(v)) adj[v].push_back(u);
  return adj;
}

// p_0 .. p_m, each positive, summing to 1 exactly.
inline memcon::BasicMemoryParams<Rational> random_params(std::mt19937_64& rng, std::size_t m) {
  std::uniform_int_distribution<int> d(1, 6);
  std::vector<int> w(m + 1);
  for (auto& x : w) x = d(rng);
  const int total = std::accumulate(w.begin(), w.end(), 0);
  std::vector<Rational> p;
  for (int x : w) p.push_back(Rational(x, total));
  return memcon::BasicMemoryParams<Rational>(std::move(p));
}

inline memcon::Configuration random_config(std::mt19937_64& rng, std::size_t n, std::uint32_t colours) {
  std::uniform_int_distribution<std::uint32_t> d(0, colours - 1);
  memcon::Configuration s(n);
  for (auto& c : s) c = d(rng);
  return s;
}

inline oracle::Chain chain_of(const memcon::WeightedDigraph& g, const memcon::MemoryParams& p, std::size_t colours) {
  oracle::Chain ch;
  ch.n = g.size();
  ch.layers = p.m() + 1;
  ch.colours = colours;
  ch.p = p.probs();
  ch.out.resize(g.size());
  for (memcon::NodeId v = 0; v < g.size(); ++v)
    for (std::size_t k = 0; k < g.out_degree(v); ++k) ch.out[v].emplace_back(g.targets(v)[k], g.weights(v)[k]);
  return ch;
}

// Oracle histories are newest first; memcon's are oldest first.
inline std::vector<std::vector<std::uint32_t>> newest_first(const memcon::HistoryStack& h) {
  return {h.rbegin(), h.rend()};
}

// Three-node graph used throughout the exact tests.
inline memcon::ExactDigraph three_node_graph() {
  return memcon::ExactDigraph(3, {{0, 1, 1},
                                  {1, 0, Rational(1, 4)},
                                  {1, 2, Rational(3, 4)},
                                  {2, 1, Rational(1, 3)},
                                  {2, 2, Rational(2, 3)}});
}

enum : memcon::Colour { red = 0, blue = 1, green = 2 };

// present = (blue, blue, red); two older layers for the three-colour example
inline memcon::HistoryStack three_colour_history() { return {{green, red, blue}, {red, blue, blue}, {blue, blue, red}}; }

}  // namespace testkit
