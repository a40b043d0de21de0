#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "memcon/rational.hpp"

namespace memcon {

using NodeId = std::uint32_t;

// Raised whenever an input violates a documented precondition (bad graph,
// bad parameters, malformed file). The CLI maps it to exit code 1.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <Weight W>
struct Edge {
  NodeId source;
  NodeId target;
  W weight;
};

// Tolerance on per-node out-weight sums for floating-point backed graphs.
inline constexpr double kRowSumTolerance = 1e-12;

// Directed graph whose out-weights form a probability distribution at every
// node (w(v,u) is the probability that v copies u). Stored as CSR with targets
// sorted per node; immutable after construction.
template <Weight W>
class BasicDigraph {
 public:
  using weight_type = W;

  BasicDigraph() = default;

  BasicDigraph(std::size_t n, std::vector<Edge<W>> edges) : offsets_(n + 1, 0) {
    if (n == 0) throw invalid_input("graph must have at least one node");
    for (const auto& e : edges) {
      if (e.source >= n || e.target >= n) {
        std::ostringstream msg;
        msg << "edge (" << e.source << "," << e.target << ") references a node outside [0," << n << ")";
        throw invalid_input(msg.str());
      }
      if (!(e.weight > W(0))) {
        std::ostringstream msg;
        msg << "edge (" << e.source << "," << e.target << ") has non-positive weight";
        throw invalid_input(msg.str());
      }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge<W>& a, const Edge<W>& b) {
      return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i].source == edges[i - 1].source && edges[i].target == edges[i - 1].target) {
        std::ostringstream msg;
        msg << "duplicate edge (" << edges[i].source << "," << edges[i].target << ")";
        throw invalid_input(msg.str());
      }
    }
    targets_.reserve(edges.size());
    weights_.reserve(edges.size());
    for (const auto& e : edges) {
      ++offsets_[e.source + 1];
      targets_.push_back(e.target);
      weights_.push_back(e.weight);
    }
    for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    validate_rows();
  }

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }

  std::span<const NodeId> targets(NodeId v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::span<const W> weights(NodeId v) const {
    return {weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t out_degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  // w(v,u); zero when the edge is absent.
  W weight(NodeId v, NodeId u) const {
    auto ts = targets(v);
    auto it = std::lower_bound(ts.begin(), ts.end(), u);
    if (it == ts.end() || *it != u) return W(0);
    return weights_[offsets_[v] + static_cast<std::size_t>(it - ts.begin())];
  }

  bool has_self_loop(NodeId v) const { return !scalar_traits<W>::is_zero(weight(v, v)); }

  std::vector<Edge<W>> edges() const {
    std::vector<Edge<W>> out;
    out.reserve(edge_count());
    for (NodeId v = 0; v < size(); ++v) {
      auto ts = targets(v);
      auto ws = weights(v);
      for (std::size_t k = 0; k < ts.size(); ++k) out.push_back({v, ts[k], ws[k]});
    }
    return out;
  }

  // Dense row-stochastic out-matrix H, row-major.
  std::vector<W> dense_matrix() const {
    const std::size_t n = size();
    std::vector<W> h(n * n, W(0));
    for (NodeId v = 0; v < n; ++v) {
      auto ts = targets(v);
      auto ws = weights(v);
      for (std::size_t k = 0; k < ts.size(); ++k) h[v * n + ts[k]] = ws[k];
    }
    return h;
  }

  BasicDigraph<double> to_double() const {
    std::vector<Edge<double>> out;
    out.reserve(edge_count());
    for (const auto& e : edges()) out.push_back({e.source, e.target, memcon::to_double(e.weight)});
    return BasicDigraph<double>(size(), std::move(out));
  }

 private:
  void validate_rows() const {
    for (NodeId v = 0; v < size(); ++v) {
      if (out_degree(v) == 0) {
        throw invalid_input("node " + std::to_string(v) + " has no out-edges");
      }
      W sum(0);
      for (const W& w : weights(v)) sum += w;
      bool ok;
      if constexpr (scalar_traits<W>::exact) {
        ok = sum == W(1);
      } else {
        ok = scalar_traits<W>::abs(sum - W(1)) <= kRowSumTolerance;
      }
      if (!ok) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "out-weights of node " << v << " sum to " << sum << ", expected 1";
        throw invalid_input(msg.str());
      }
    }
  }

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<W> weights_;
};

using WeightedDigraph = BasicDigraph<double>;
using ExactDigraph = BasicDigraph<Rational>;

// Builds a graph whose out-weights are uniform over the given neighbour lists.
template <Weight W = double>
BasicDigraph<W> uniform_digraph(const std::vector<std::vector<NodeId>>& neighbours) {
  std::vector<Edge<W>> edges;
  for (NodeId v = 0; v < neighbours.size(); ++v) {
    const auto d = static_cast<std::int64_t>(neighbours[v].size());
    for (NodeId u : neighbours[v]) {
      if constexpr (scalar_traits<W>::exact) {
        edges.push_back({v, u, W(1, d)});
      } else {
        edges.push_back({v, u, 1.0 / static_cast<double>(d)});
      }
    }
  }
  return BasicDigraph<W>(neighbours.size(), std::move(edges));
}

}  // namespace memcon
