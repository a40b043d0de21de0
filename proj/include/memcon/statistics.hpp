#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "memcon/graph.hpp"
#include "memcon/simulation.hpp"

namespace memcon {

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, n-1 denominator
  double median = 0.0;
};

inline Summary summarize(std::span<const double> xs) {
  if (xs.empty()) throw invalid_input("cannot summarise an empty sample");
  Summary s;
  const auto n = static_cast<double>(xs.size());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

inline std::vector<double> rounds_of(std::span<const RunRecord> records) {
  std::size_t capped = 0;
  std::vector<double> xs;
  xs.reserve(records.size());
  for (const auto& r : records) {
    if (r.cap_exceeded()) {
      ++capped;
    } else {
      xs.push_back(static_cast<double>(*r.rounds));
    }
  }
  if (capped > 0)
    throw invalid_input(std::to_string(capped) + " of " + std::to_string(records.size()) +
                        " runs exceeded the round cap; refusing to summarise a censored sample");
  return xs;
}

inline Summary summarize(std::span<const RunRecord> records) { return summarize(rounds_of(records)); }

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;
};

// Welch's unequal-variance two-sample t-test, two-sided.
inline TTestResult welch_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw invalid_input("t-test needs at least two observations per sample");
  const Summary sa = summarize(a), sb = summarize(b);
  const double va = sa.std * sa.std / static_cast<double>(a.size());
  const double vb = sb.std * sb.std / static_cast<double>(b.size());
  if (va == 0.0 && vb == 0.0) throw invalid_input("t-test undefined: both samples have zero variance");
  TTestResult r;
  r.t_statistic = (sa.mean - sb.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  boost::math::students_t dist(r.df);
  r.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t_statistic))), 0.0, 1.0);
  return r;
}

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;
};

// Chi-square test of homogeneity for two count vectors over the same
// categories. Categories empty in both samples are dropped.
inline ChiSquareResult chi_square_homogeneity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw invalid_input("chi-square samples need the same categories");
  const double na = std::accumulate(a.begin(), a.end(), 0.0);
  const double nb = std::accumulate(b.begin(), b.end(), 0.0);
  if (na <= 0.0 || nb <= 0.0) throw invalid_input("chi-square samples must be non-empty");
  ChiSquareResult r;
  std::size_t used = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double col = a[k] + b[k];
    if (col == 0.0) continue;
    ++used;
    const double ea = col * na / (na + nb), eb = col * nb / (na + nb);
    r.statistic += (a[k] - ea) * (a[k] - ea) / ea + (b[k] - eb) * (b[k] - eb) / eb;
  }
  r.df = static_cast<double>(used) - 1.0;
  if (r.df < 1.0) return r;
  boost::math::chi_squared dist(r.df);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace memcon
