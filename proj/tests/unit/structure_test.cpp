#include <gtest/gtest.h>

#include <random>

#include "memcon/structure.hpp"
#include "oracle/cycle_gcd.hpp"
#include "support/random_graphs.hpp"

using namespace memcon;

namespace {
WeightedDigraph undirected(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& links) {
  std::vector<std::vector<NodeId>> nb(n);
  for (auto [a, b] : links) {
    nb[a].push_back(b);
    nb[b].push_back(a);
  }
  return uniform_digraph(nb);
}
}  // namespace

TEST(Structure, StrongConnectivity) {
  EXPECT_TRUE(is_strongly_connected(WeightedDigraph(2, {{0, 1, 1}, {1, 0, 1}})));
  EXPECT_FALSE(is_strongly_connected(WeightedDigraph(2, {{0, 1, 1}, {1, 1, 1}})));
  EXPECT_THROW(graph_period(WeightedDigraph(2, {{0, 1, 1}, {1, 1, 1}})), invalid_input);
}

TEST(Structure, EvenCyclesPathsTreesArePeriodic) {
  EXPECT_EQ(graph_period(undirected(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})), 2u);
  EXPECT_FALSE(is_well_behaved(undirected(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})));         // path
  EXPECT_FALSE(is_well_behaved(undirected(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}})));  // tree
}

TEST(Structure, OddCycleAndSelfLoop) {
  EXPECT_TRUE(is_well_behaved(undirected(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})));
  auto looped = uniform_digraph<double>({{1}, {0, 2}, {1, 2}});
  EXPECT_TRUE(is_well_behaved(looped));
  // directed 3-cycle has period 3
  EXPECT_EQ(graph_period(WeightedDigraph(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}})), 3u);
}

TEST(Structure, PeriodMatchesCycleGcdOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    auto g = testkit::random_strong_graph(rng, n, 0.15, trial % 3 == 0).to_double();
    EXPECT_EQ(graph_period(g), oracle::exhaustive_cycle_gcd(testkit::adjacency(g))) << "trial " << trial;
  }
}
