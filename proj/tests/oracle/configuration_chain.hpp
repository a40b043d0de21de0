#pragma once

// Exact fixation probabilities of the m-memory process, computed from the
// process definition alone: a Markov chain on (s_t, s_{t-1}, ..., s_{t-m})
// solved as an absorbing chain. No stationary distributions, no memory graph.

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace oracle {

struct Chain {
  std::size_t n = 0;
  std::size_t layers = 0;  // m + 1
  std::size_t colours = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> out;  // per node, (target, weight)
  std::vector<double> p;                                         // p_0 .. p_m
};

struct Fixation {
  std::vector<double> win;  // per colour
  double deadlock = 0.0;    // mass that never reaches a stable consensus
  std::size_t states = 0;
};

// history is newest first: history[i] is the configuration at round t - i.
inline Fixation exact_fixation(const Chain& ch, const std::vector<std::vector<std::uint32_t>>& history,
                               std::size_t max_states = std::size_t{1} << 16) {
  const std::size_t k = ch.colours, n = ch.n, L = ch.layers;
  if (history.size() != L) throw std::invalid_argument("oracle: history depth");
  double space = 1.0;
  for (std::size_t i = 0; i < n * L; ++i) space *= static_cast<double>(k);
  if (space > static_cast<double>(max_states)) throw std::invalid_argument("oracle: configuration space too large");

  const std::size_t per_config = static_cast<std::size_t>(std::llround(std::pow(double(k), double(n))));
  auto encode_config = [&](const std::vector<std::uint32_t>& s) {
    std::size_t code = 0;
    for (std::size_t v = n; v-- > 0;) code = code * k + s[v];
    return code;
  };
  auto decode_config = [&](std::size_t code) {
    std::vector<std::uint32_t> s(n);
    for (std::size_t v = 0; v < n; ++v) {
      s[v] = static_cast<std::uint32_t>(code % k);
      code /= k;
    }
    return s;
  };
  // state code: layer 0 in the lowest digits
  auto encode = [&](const std::vector<std::size_t>& cfgs) {
    std::size_t code = 0;
    for (std::size_t i = L; i-- > 0;) code = code * per_config + cfgs[i];
    return code;
  };
  auto decode = [&](std::size_t code) {
    std::vector<std::size_t> cfgs(L);
    for (std::size_t i = 0; i < L; ++i) {
      cfgs[i] = code % per_config;
      code /= per_config;
    }
    return cfgs;
  };
  std::vector<std::size_t> mono(k);
  for (std::size_t c = 0; c < k; ++c) mono[c] = encode_config(std::vector<std::uint32_t>(n, static_cast<std::uint32_t>(c)));
  auto absorbed = [&](const std::vector<std::size_t>& cfgs) -> long {
    for (std::size_t c = 0; c < k; ++c) {
      bool all = true;
      for (auto x : cfgs) all = all && x == mono[c];
      if (all) return static_cast<long>(c);
    }
    return -1;
  };

  // successors of a state, as (state code, probability)
  auto successors = [&](std::size_t code) {
    auto cfgs = decode(code);
    std::vector<std::vector<std::uint32_t>> layer(L);
    for (std::size_t i = 0; i < L; ++i) layer[i] = decode_config(cfgs[i]);
    // per node colour distribution
    std::vector<std::vector<double>> q(n, std::vector<double>(k, 0.0));
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < L; ++i)
        for (auto [u, w] : ch.out[v]) q[v][layer[i][u]] += ch.p[i] * w;
    std::vector<std::pair<std::size_t, double>> out;
    std::vector<std::uint32_t> next(n, 0);
    for (std::size_t c = 0; c < per_config; ++c) {
      next = decode_config(c);
      double prob = 1.0;
      for (std::size_t v = 0; v < n && prob > 0.0; ++v) prob *= q[v][next[v]];
      if (prob == 0.0) continue;
      std::vector<std::size_t> shifted(L);
      shifted[0] = c;
      for (std::size_t i = 1; i < L; ++i) shifted[i] = cfgs[i - 1];
      out.emplace_back(encode(shifted), prob);
    }
    return out;
  };

  std::vector<std::size_t> start_cfgs(L);
  for (std::size_t i = 0; i < L; ++i) start_cfgs[i] = encode_config(history[i]);
  const std::size_t start = encode(start_cfgs);

  std::unordered_map<std::size_t, std::size_t> index;
  std::vector<std::size_t> codes;
  std::vector<long> absorb;
  std::vector<std::vector<std::pair<std::size_t, double>>> edges;
  std::queue<std::size_t> todo;
  index[start] = 0;
  codes.push_back(start);
  todo.push(start);
  while (!todo.empty()) {
    std::size_t code = todo.front();
    todo.pop();
    const long a = absorbed(decode(code));
    absorb.push_back(a);
    edges.emplace_back();
    if (a >= 0) continue;
    for (auto [t, pr] : successors(code)) {
      auto [it, fresh] = index.emplace(t, codes.size());
      if (fresh) {
        codes.push_back(t);
        todo.push(t);
      }
      edges.back().emplace_back(it->second, pr);
    }
  }
  const std::size_t S = codes.size();

  // states that can reach an absorbing state
  std::vector<std::vector<std::size_t>> rev(S);
  for (std::size_t s = 0; s < S; ++s)
    for (auto [t, pr] : edges[s]) rev[t].push_back(s);
  std::vector<bool> live(S, false);
  std::queue<std::size_t> q;
  for (std::size_t s = 0; s < S; ++s)
    if (absorb[s] >= 0) {
      live[s] = true;
      q.push(s);
    }
  while (!q.empty()) {
    auto s = q.front();
    q.pop();
    for (auto r : rev[s])
      if (!live[r]) {
        live[r] = true;
        q.push(r);
      }
  }

  Fixation result;
  result.states = S;
  result.win.assign(k, 0.0);
  if (absorb[0] >= 0) {
    result.win[static_cast<std::size_t>(absorb[0])] = 1.0;
    return result;
  }
  if (!live[0]) {
    result.deadlock = 1.0;
    return result;
  }
  // unknowns: live transient states
  std::vector<long> col(S, -1);
  std::size_t T = 0;
  for (std::size_t s = 0; s < S; ++s)
    if (live[s] && absorb[s] < 0) col[s] = static_cast<long>(T++);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(k));
  for (std::size_t s = 0; s < S; ++s) {
    if (col[s] < 0) continue;
    trip.emplace_back(col[s], col[s], 1.0);
    for (auto [t, pr] : edges[s]) {
      if (absorb[t] >= 0) rhs(col[s], absorb[t]) += pr;
      else if (col[t] >= 0) trip.emplace_back(col[s], col[t], -pr);
    }
  }
  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(T));
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  // direct sparse LU fills in badly on the larger chains, so try a Krylov
  // solve first and fall back to LU when it breaks down
  auto residual_ok = [&](const Eigen::MatrixXd& x) { return (A * x - rhs).lpNorm<Eigen::Infinity>() <= 1e-12; };
  Eigen::MatrixXd x(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(k));
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> krylov;
  krylov.setTolerance(1e-15);
  krylov.setMaxIterations(10000);
  krylov.compute(A);
  for (Eigen::Index c = 0; c < x.cols(); ++c) x.col(c) = krylov.solve(Eigen::VectorXd(rhs.col(c)));
  if (!residual_ok(x)) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw std::runtime_error("oracle: sparse LU failed");
    x = lu.solve(rhs);
    if (!residual_ok(x)) throw std::runtime_error("oracle: linear solve did not converge");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    result.win[c] = x(col[0], static_cast<Eigen::Index>(c));
    total += result.win[c];
  }
  result.deadlock = std::max(0.0, 1.0 - total);
  return result;
}

}  // namespace oracle
