#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "memcon/graph.hpp"
#include "memcon/stationary.hpp"
#include "memcon/structure.hpp"

namespace memcon {

// Probabilities (p_0, ..., p_m) of copying from the configuration i rounds ago.
template <Weight W>
class BasicMemoryParams {
 public:
  BasicMemoryParams() : probs_{W(1)} {}

  explicit BasicMemoryParams(std::vector<W> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw invalid_input("memory parameters need at least p_0");
    W sum(0);
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (!(probs_[i] > W(0))) throw invalid_input("memory probability p_" + std::to_string(i) + " must be positive");
      sum += probs_[i];
    }
    bool ok;
    if constexpr (scalar_traits<W>::exact) {
      ok = sum == W(1);
    } else {
      ok = std::abs(sum - 1.0) <= kRowSumTolerance;
    }
    if (!ok) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "memory probabilities sum to " << sum << ", expected 1";
      throw invalid_input(msg.str());
    }
  }

  std::size_t m() const { return probs_.size() - 1; }
  const std::vector<W>& probs() const { return probs_; }
  const W& operator[](std::size_t i) const { return probs_[i]; }

  BasicMemoryParams<double> to_double() const {
    std::vector<double> out;
    for (const W& p : probs_) out.push_back(memcon::to_double(p));
    return BasicMemoryParams<double>(std::move(out));
  }

 private:
  std::vector<W> probs_;
};

using MemoryParams = BasicMemoryParams<double>;

// One-layer memory (p0, 1 - p0), or memoryless when p0 == 1.
inline MemoryParams one_layer_params(double p0) {
  if (p0 == 1.0) return MemoryParams{};
  return MemoryParams({p0, 1.0 - p0});
}

template <Weight W>
struct LayerWeights {
  std::vector<W> alphas;  // alpha_i = 1 - p_0 - ... - p_{i-1}
  W sigma;                // sum_i (i + 1) p_i

  // Combined influence alpha_i / sigma of each layer.
  std::vector<W> normalized() const {
    std::vector<W> out;
    out.reserve(alphas.size());
    for (const W& a : alphas) out.push_back(a / sigma);
    return out;
  }
};

template <Weight W>
LayerWeights<W> layer_weights(const BasicMemoryParams<W>& p) {
  LayerWeights<W> lw{{}, W(0)};
  W remaining(1);
  for (std::size_t i = 0; i <= p.m(); ++i) {
    lw.alphas.push_back(remaining);
    remaining -= p[i];
    lw.sigma += W(static_cast<std::int64_t>(i + 1)) * p[i];
  }
  return lw;
}

// The m-memory graph: layer 0 is the present, layer i the state i rounds ago.
// Layered node index is layer * n + base node.
template <Weight W>
class LayeredGraph {
 public:
  LayeredGraph(BasicDigraph<W> graph, std::size_t base_size, std::size_t m)
      : graph_(std::move(graph)), base_size_(base_size), m_(m) {}

  const BasicDigraph<W>& graph() const { return graph_; }
  std::size_t base_size() const { return base_size_; }
  std::size_t m() const { return m_; }
  std::size_t layers() const { return m_ + 1; }

  NodeId node(std::size_t layer, NodeId base) const { return static_cast<NodeId>(layer * base_size_ + base); }
  std::size_t layer_of(NodeId v) const { return v / base_size_; }
  NodeId base_node_of(NodeId v) const { return static_cast<NodeId>(v % base_size_); }

  std::string label(NodeId v) const {
    return "L" + std::to_string(layer_of(v)) + "_" + std::to_string(base_node_of(v));
  }

 private:
  BasicDigraph<W> graph_;
  std::size_t base_size_;
  std::size_t m_;
};

template <Weight W>
LayeredGraph<W> build_memory_graph(const BasicDigraph<W>& g, const BasicMemoryParams<W>& p) {
  const std::size_t n = g.size();
  const std::size_t m = p.m();
  std::vector<Edge<W>> edges;
  edges.reserve(g.edge_count() * (m + 1) + n * m);
  for (const auto& e : g.edges()) {
    // horizontal (i = 0) and descending (i > 0) edges out of the present layer
    for (std::size_t i = 0; i <= m; ++i)
      edges.push_back({e.source, static_cast<NodeId>(i * n + e.target), p[i] * e.weight});
  }
  for (std::size_t i = 1; i <= m; ++i) {
    for (NodeId j = 0; j < n; ++j)
      edges.push_back({static_cast<NodeId>(i * n + j), static_cast<NodeId>((i - 1) * n + j), W(1)});
  }
  return LayeredGraph<W>(BasicDigraph<W>(n * (m + 1), std::move(edges)), n, m);
}

// Test hook: by construction every memory graph with m >= 1 over a strongly
// connected graph is aperiodic.
template <Weight W>
bool memory_graph_is_well_behaved_check(const BasicDigraph<W>& g, const BasicMemoryParams<W>& p) {
  if (p.m() < 1) throw invalid_input("memory graph check needs m >= 1");
  if (!is_strongly_connected(g)) throw invalid_input("memory graph check needs a strongly connected graph");
  return is_well_behaved(build_memory_graph(g, p).graph());
}

// Stationary distribution of the memory graph in closed form:
// layer i carries (alpha_i / sigma) * mu.
template <Weight W>
Influence<W> memory_stationary(const Influence<W>& mu, const BasicMemoryParams<W>& p) {
  const auto lw = layer_weights(p);
  Influence<W> out;
  out.reserve(mu.size() * (p.m() + 1));
  for (std::size_t i = 0; i <= p.m(); ++i) {
    const W scale = lw.alphas[i] / lw.sigma;
    for (const W& x : mu) out.push_back(scale * x);
  }
  return out;
}

}  // namespace memcon
