#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "memcon/graph.hpp"
#include "memcon/structure.hpp"

namespace memcon {

// Per-node influence: the stationary distribution of the out-matrix.
template <Weight W>
using Influence = std::vector<W>;

using InfluenceVector = Influence<double>;

class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct StationaryOptions {
  double tolerance = 1e-12;
  std::size_t direct_threshold = 2000;
  std::size_t max_iterations = 10'000'000;
};

// max_v |(mu H)(v) - mu(v)|
template <Weight W>
double stationary_residual(const BasicDigraph<W>& g, const Influence<W>& mu) {
  std::vector<double> next(g.size(), 0.0);
  for (NodeId v = 0; v < g.size(); ++v) {
    auto ts = g.targets(v);
    auto ws = g.weights(v);
    const double mv = to_double(mu[v]);
    for (std::size_t k = 0; k < ts.size(); ++k) next[ts[k]] += mv * to_double(ws[k]);
  }
  double worst = 0.0;
  for (NodeId v = 0; v < g.size(); ++v) worst = std::max(worst, std::abs(next[v] - to_double(mu[v])));
  return worst;
}

namespace detail {

// Solves mu (H - I) = 0 with sum(mu) = 1 by Gaussian elimination on the
// transposed system, last equation replaced by the normalisation row.
template <Weight W>
Influence<W> solve_stationary_direct(const BasicDigraph<W>& g) {
  const std::size_t n = g.size();
  std::vector<W> a(n * n, W(0));
  std::vector<W> rhs(n, W(0));
  for (NodeId v = 0; v < n; ++v) {
    auto ts = g.targets(v);
    auto ws = g.weights(v);
    for (std::size_t k = 0; k < ts.size(); ++k) a[ts[k] * n + v] += ws[k];
    a[v * n + v] -= W(1);
  }
  for (std::size_t j = 0; j < n; ++j) a[(n - 1) * n + j] = W(1);
  rhs[n - 1] = W(1);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    if constexpr (scalar_traits<W>::exact) {
      while (pivot < n && scalar_traits<W>::is_zero(a[pivot * n + col])) ++pivot;
    } else {
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (pivot == n || scalar_traits<W>::is_zero(a[pivot * n + col]))
      throw std::runtime_error("singular stationary system");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
      std::swap(rhs[col], rhs[pivot]);
    }
    const W inv = W(1) / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (scalar_traits<W>::is_zero(a[r * n + col])) continue;
      const W factor = a[r * n + col] * inv;
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= factor * a[col * n + j];
      rhs[r] -= factor * rhs[col];
    }
  }
  Influence<W> mu(n, W(0));
  for (std::size_t i = n; i-- > 0;) {
    W acc = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[i * n + j] * mu[j];
    mu[i] = acc / a[i * n + i];
  }
  if constexpr (!scalar_traits<W>::exact) {
    double total = 0.0;
    for (double& x : mu) {
      if (x < 0.0) x = 0.0;  // round-off only; the true solution is positive
      total += x;
    }
    for (double& x : mu) x /= total;
  }
  return mu;
}

// Power iteration on the lazy chain (I + H)/2, i.e. each step averages two
// consecutive iterates. Same fixed point as H, but aperiodic.
inline InfluenceVector solve_stationary_iterative(const WeightedDigraph& g, const StationaryOptions& opt) {
  const std::size_t n = g.size();
  InfluenceVector mu(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double residual = 0.0;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (NodeId v = 0; v < n; ++v) {
      auto ts = g.targets(v);
      auto ws = g.weights(v);
      for (std::size_t k = 0; k < ts.size(); ++k) next[ts[k]] += mu[v] * ws[k];
    }
    residual = 0.0;
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      residual = std::max(residual, std::abs(next[v] - mu[v]));
      next[v] = 0.5 * (next[v] + mu[v]);
      total += next[v];
    }
    for (double& x : next) x /= total;
    std::swap(mu, next);
    if (residual <= opt.tolerance) return mu;
  }
  std::ostringstream msg;
  msg << "power iteration did not converge within " << opt.max_iterations << " iterations (residual " << residual
      << ")";
  throw convergence_error(msg.str(), residual);
}

}  // namespace detail

// Stationary distribution mu of g's out-matrix (mu H = mu, sum mu = 1).
// Exact graphs are always solved directly in rational arithmetic.
template <Weight W>
Influence<W> stationary_distribution(const BasicDigraph<W>& g, const StationaryOptions& opt = {}) {
  if (!is_strongly_connected(g)) throw invalid_input("stationary distribution requires a strongly connected graph");
  if constexpr (scalar_traits<W>::exact) {
    return detail::solve_stationary_direct(g);
  } else {
    InfluenceVector mu = g.size() <= opt.direct_threshold ? detail::solve_stationary_direct(g)
                                                          : detail::solve_stationary_iterative(g, opt);
    double residual = stationary_residual(g, mu);
    if (residual > opt.tolerance) {
      std::ostringstream msg;
      msg << "stationary solve residual " << residual << " exceeds tolerance " << opt.tolerance;
      throw convergence_error(msg.str(), residual);
    }
    return mu;
  }
}

}  // namespace memcon
