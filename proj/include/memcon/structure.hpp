#pragma once

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <vector>

#include "memcon/graph.hpp"

namespace memcon {

namespace detail {

template <Weight W>
std::vector<bool> reachable_from(const BasicDigraph<W>& g, NodeId start, bool reversed) {
  const std::size_t n = g.size();
  std::vector<std::vector<NodeId>> rev;
  if (reversed) {
    rev.resize(n);
    for (NodeId v = 0; v < n; ++v)
      for (NodeId u : g.targets(v)) rev[u].push_back(v);
  }
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    auto visit = [&](NodeId u) {
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
    };
    if (reversed) {
      for (NodeId u : rev[v]) visit(u);
    } else {
      for (NodeId u : g.targets(v)) visit(u);
    }
  }
  return seen;
}

}  // namespace detail

template <Weight W>
bool is_strongly_connected(const BasicDigraph<W>& g) {
  if (g.size() == 0) return false;
  auto all = [](const std::vector<bool>& s) { return std::all_of(s.begin(), s.end(), [](bool b) { return b; }); };
  return all(detail::reachable_from(g, 0, false)) && all(detail::reachable_from(g, 0, true));
}

// Period of a strongly connected graph: the gcd of all directed cycle lengths.
// Uses BFS levels from node 0; every edge (u,v) contributes
// level(u) + 1 - level(v) to the running gcd.
template <Weight W>
std::size_t graph_period(const BasicDigraph<W>& g) {
  if (!is_strongly_connected(g)) throw invalid_input("period is only defined for strongly connected graphs");
  const std::size_t n = g.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(n, unset);
  std::queue<NodeId> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (NodeId u : g.targets(v)) {
      if (level[u] == unset) {
        level[u] = level[v] + 1;
        frontier.push(u);
      }
    }
  }
  std::size_t period = 0;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.targets(v)) {
      auto diff = static_cast<long long>(level[v]) + 1 - static_cast<long long>(level[u]);
      period = std::gcd(period, static_cast<std::size_t>(std::llabs(diff)));
      if (period == 1) return 1;
    }
  }
  return period;
}

// Consensus is reached with probability 1 from every start iff the graph is
// aperiodic.
template <Weight W>
bool is_well_behaved(const BasicDigraph<W>& g) {
  return graph_period(g) == 1;
}

}  // namespace memcon
