#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "memcon/graph.hpp"
#include "memcon/probability.hpp"
#include "memcon/rational.hpp"
#include "memcon/text.hpp"

namespace memcon {

// Text graph format, one record per line ('#' starts a comment):
//   n <count>
//   v <index> <label>          optional node label
//   e <src> <dst> <weight>     src/dst are indices or labels; weight decimal or a/b
struct GraphFile {
  WeightedDigraph graph;
  std::optional<ExactDigraph> exact;  // present when every weight is an integer or fraction
  std::vector<std::string> labels;    // empty when the file declares none
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

inline std::string at_line(std::size_t lineno) { return "line " + std::to_string(lineno) + ": "; }

}  // namespace detail

inline GraphFile read_graph(std::istream& is) {
  std::optional<std::size_t> n;
  std::vector<std::string> labels;
  std::map<std::string, NodeId, std::less<>> by_label;
  struct RawEdge {
    NodeId src, dst;
    std::string weight;
    std::size_t line;
  };
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t lineno = 0;
  auto node_ref = [&](std::string_view tok, std::size_t at) -> NodeId {
    if (auto it = by_label.find(tok); it != by_label.end()) return it->second;
    try {
      auto v = parse_uint(tok);
      if (v >= *n) throw invalid_input("");
      return static_cast<NodeId>(v);
    } catch (const invalid_input&) {
      throw invalid_input(detail::at_line(at) + "unknown node '" + std::string(tok) + "'");
    }
  };
  while (std::getline(is, line)) {
    ++lineno;
    auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    auto tok = detail::tokens(body);
    if (tok[0] == "n") {
      if (n) throw invalid_input(detail::at_line(lineno) + "duplicate node count");
      if (tok.size() != 2) throw invalid_input(detail::at_line(lineno) + "expected 'n <count>'");
      n = parse_uint(tok[1]);
      if (*n == 0) throw invalid_input(detail::at_line(lineno) + "node count must be positive");
      continue;
    }
    if (!n) throw invalid_input(detail::at_line(lineno) + "'n <count>' must come first");
    if (tok[0] == "v") {
      if (tok.size() != 3) throw invalid_input(detail::at_line(lineno) + "expected 'v <index> <label>'");
      auto idx = parse_uint(tok[1]);
      if (idx >= *n) throw invalid_input(detail::at_line(lineno) + "node index out of range");
      if (labels.empty()) labels.resize(*n);
      labels[idx] = std::string(tok[2]);
      by_label.emplace(std::string(tok[2]), static_cast<NodeId>(idx));
    } else if (tok[0] == "e") {
      if (tok.size() != 4) throw invalid_input(detail::at_line(lineno) + "expected 'e <src> <dst> <weight>'");
      raw.push_back({node_ref(tok[1], lineno), node_ref(tok[2], lineno), std::string(tok[3]), lineno});
    } else {
      throw invalid_input(detail::at_line(lineno) + "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!n) throw invalid_input("graph file has no 'n <count>' line");

  bool all_rational = true;
  for (const auto& e : raw) all_rational = all_rational && Rational::looks_rational(e.weight);

  GraphFile out;
  std::vector<Edge<double>> edges;
  std::vector<Edge<Rational>> exact_edges;
  for (const auto& e : raw) {
    try {
      if (all_rational) {
        auto w = Rational::parse(e.weight);
        exact_edges.push_back({e.src, e.dst, w});
        edges.push_back({e.src, e.dst, w.to_double()});
      } else {
        edges.push_back({e.src, e.dst, parse_double(e.weight)});
      }
    } catch (const std::exception& ex) {
      throw invalid_input(detail::at_line(e.line) + ex.what());
    }
  }
  if (all_rational) out.exact = ExactDigraph(*n, std::move(exact_edges));
  out.graph = WeightedDigraph(*n, std::move(edges));
  out.labels = std::move(labels);
  return out;
}

inline GraphFile read_graph_string(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_graph(is);
}

template <Weight W>
void write_graph(std::ostream& os, const BasicDigraph<W>& g, const std::vector<std::string>& labels = {}) {
  os << "n " << g.size() << '\n';
  for (std::size_t v = 0; v < labels.size(); ++v) os << "v " << v << ' ' << labels[v] << '\n';
  auto name = [&](NodeId v) { return labels.empty() ? std::to_string(v) : labels[v]; };
  for (const auto& e : g.edges()) {
    os << "e " << name(e.source) << ' ' << name(e.target) << ' ';
    if constexpr (scalar_traits<W>::exact) {
      os << e.weight.str();
    } else {
      os << format_double(e.weight);
    }
    os << '\n';
  }
}

// Configuration file: one colour per line, layers separated by blank lines,
// oldest layer first. A colour is a numeric id or a name from `palette`.
inline HistoryStack read_history(std::istream& is, const std::vector<std::string>& palette = {}) {
  HistoryStack layers(1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    auto body = detail::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) {
      // a comment-only line does not separate layers
      if (hash == std::string::npos && !layers.back().empty()) layers.emplace_back();
      continue;
    }
    Colour c;
    if (auto it = std::find(palette.begin(), palette.end(), body); it != palette.end()) {
      c = static_cast<Colour>(it - palette.begin());
    } else {
      try {
        c = static_cast<Colour>(parse_uint(body));
      } catch (const invalid_input&) {
        throw invalid_input(detail::at_line(lineno) + "unknown colour '" + std::string(body) + "'");
      }
    }
    layers.back().push_back(c);
  }
  if (layers.back().empty()) layers.pop_back();
  if (layers.empty()) throw invalid_input("configuration file is empty");
  for (const auto& l : layers)
    if (l.size() != layers.front().size()) throw invalid_input("configuration layers differ in length");
  return layers;
}

inline HistoryStack read_history_string(std::string_view text, const std::vector<std::string>& palette = {}) {
  std::istringstream is{std::string(text)};
  return read_history(is, palette);
}

}  // namespace memcon
