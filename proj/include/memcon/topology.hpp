#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memcon/graph.hpp"

namespace memcon {

enum class Family { clique, cycle, biclique, full_binary_tree, torus_grid };

inline constexpr std::array<Family, 5> kAllFamilies = {Family::clique, Family::cycle, Family::biclique,
                                                       Family::full_binary_tree, Family::torus_grid};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::clique: return "clique";
    case Family::cycle: return "cycle";
    case Family::biclique: return "biclique";
    case Family::full_binary_tree: return "full_binary_tree";
    case Family::torus_grid: return "torus_grid";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (Family f : kAllFamilies)
    if (family_name(f) == name) return f;
  if (name == "tree" || name == "bintree") return Family::full_binary_tree;
  if (name == "torus" || name == "grid") return Family::torus_grid;
  throw invalid_input("unknown topology family '" + std::string(name) + "'");
}

struct TopologySpec {
  Family family = Family::clique;
  std::size_t n = 0;
  // Biclique partition sizes; defaults to floor(n/2), ceil(n/2).
  std::optional<std::pair<std::size_t, std::size_t>> parts;
  // Torus side lengths (rows, cols); defaults to the most square odd x odd factorisation of n.
  std::optional<std::pair<std::size_t, std::size_t>> sides;
};

namespace detail {

inline bool is_full_tree_size(std::size_t n) { return n >= 1 && ((n + 1) & n) == 0; }

// Most square factorisation n = rows * cols with both odd and >= 3, rows <= cols.
inline std::optional<std::pair<std::size_t, std::size_t>> odd_torus_sides(std::size_t n) {
  auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while ((root + 1) * (root + 1) <= n) ++root;
  while (root * root > n) --root;
  for (std::size_t r = root; r >= 3; --r) {
    if (n % r == 0 && r % 2 == 1 && (n / r) % 2 == 1) return std::pair{r, n / r};
  }
  return std::nullopt;
}

inline std::pair<std::size_t, std::size_t> biclique_parts(const TopologySpec& spec) {
  auto parts = spec.parts.value_or(std::pair{spec.n / 2, spec.n - spec.n / 2});
  if (parts.first == 0 || parts.second == 0 || parts.first + parts.second != spec.n)
    throw invalid_input("biclique partition sizes must be positive and sum to n=" + std::to_string(spec.n));
  return parts;
}

inline std::pair<std::size_t, std::size_t> torus_sides(const TopologySpec& spec) {
  std::pair<std::size_t, std::size_t> sides;
  if (spec.sides) {
    sides = *spec.sides;
  } else {
    auto found = odd_torus_sides(spec.n);
    if (!found)
      throw invalid_input("torus_grid needs n = rows*cols with both sides odd and >= 3; n=" +
                          std::to_string(spec.n) + " has no such factorisation");
    sides = *found;
  }
  if (sides.first * sides.second != spec.n)
    throw invalid_input("torus sides do not multiply to n=" + std::to_string(spec.n));
  if (sides.first < 3 || sides.second < 3 || sides.first % 2 == 0 || sides.second % 2 == 0)
    throw invalid_input("torus sides must be odd and >= 3 (an even side makes the grid bipartite)");
  return sides;
}

}  // namespace detail

// Throws invalid_input with an explanation when n does not fit the family.
inline void validate(const TopologySpec& spec) {
  switch (spec.family) {
    case Family::clique:
      if (spec.n < 2) throw invalid_input("clique needs n >= 2");
      break;
    case Family::cycle:
      if (spec.n < 3) throw invalid_input("cycle needs n >= 3");
      break;
    case Family::biclique:
      if (spec.n < 2) throw invalid_input("biclique needs n >= 2");
      detail::biclique_parts(spec);
      break;
    case Family::full_binary_tree:
      if (!detail::is_full_tree_size(spec.n))
        throw invalid_input("full_binary_tree needs n = 2^k - 1; got " + std::to_string(spec.n));
      break;
    case Family::torus_grid:
      detail::torus_sides(spec);
      break;
  }
}

// Neighbour lists of the family; undirected families list both directions.
inline std::vector<std::vector<NodeId>> topology_neighbours(const TopologySpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  std::vector<std::vector<NodeId>> nb(n);
  auto link = [&](std::size_t a, std::size_t b) {
    nb[a].push_back(static_cast<NodeId>(b));
    nb[b].push_back(static_cast<NodeId>(a));
  };
  switch (spec.family) {
    case Family::clique:
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u = v + 1; u < n; ++u) link(v, u);
      break;
    case Family::cycle:
      for (std::size_t v = 0; v < n; ++v) link(v, (v + 1) % n);
      break;
    case Family::biclique: {
      auto [a, b] = detail::biclique_parts(spec);
      for (std::size_t v = 0; v < a; ++v)
        for (std::size_t u = a; u < n; ++u) link(v, u);
      // single loop on the lowest-indexed node of the larger side
      std::size_t loop = b > a ? a : 0;
      nb[loop].push_back(static_cast<NodeId>(loop));
      break;
    }
    case Family::full_binary_tree:
      for (std::size_t v = 1; v < n; ++v) link(v, (v - 1) / 2);
      nb[0].push_back(0);
      break;
    case Family::torus_grid: {
      auto [rows, cols] = detail::torus_sides(spec);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          std::size_t v = r * cols + c;
          link(v, r * cols + (c + 1) % cols);
          link(v, ((r + 1) % rows) * cols + c);
        }
      }
      break;
    }
  }
  return nb;
}

template <Weight W = double>
BasicDigraph<W> make_topology(const TopologySpec& spec) {
  return uniform_digraph<W>(topology_neighbours(spec));
}

}  // namespace memcon
