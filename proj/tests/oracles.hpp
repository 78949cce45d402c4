// Independent reference implementations the suite checks production code
// against. Deliberately naive and slow, written from the textbook formulas
// along different algorithmic routes than the library.
//
// Copyright 2026 the semshift authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Central finite difference of f at *x with step h (f re-evaluated, *x
/// restored afterwards).
template <class F>
double central_diff(const F& f, double* x, double h = 1e-5) {
  const double saved = *x;
  *x = saved + h;
  const double hi = f();
  *x = saved - h;
  const double lo = f();
  *x = saved;
  return (hi - lo) / (2.0 * h);
}

/// Product-moment r in long double, direct sums formula.
inline long double pearson_r_naive(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return num / den;
}

/// Two-tailed Student-t p-value by Simpson quadrature of the density over
/// [0, |t|]: p = 1 - 2 * integral. No series, no continued fractions.
inline long double t_two_tailed_quadrature(double t, double df) {
  const long double nu = df;
  const long double a = std::fabs(static_cast<long double>(t));
  if (a == 0.0L) return 1.0L;
  const long double log_c = std::lgamma((nu + 1.0L) / 2.0L) - std::lgamma(nu / 2.0L) -
                            0.5L * std::log(nu * 3.14159265358979323846264338327950288L);
  const auto density = [&](long double x) {
    return std::exp(log_c - (nu + 1.0L) / 2.0L * std::log1p(x * x / nu));
  };
  const std::size_t steps = 200000;  // even
  const long double h = a / steps;
  long double sum = density(0.0L) + density(a);
  for (std::size_t i = 1; i < steps; ++i) sum += density(h * i) * (i % 2 ? 4.0L : 2.0L);
  const long double integral = sum * h / 3.0L;
  long double p = 1.0L - 2.0L * integral;
  return p < 0.0L ? 0.0L : p;
}

/// Krippendorff's alpha for binary nominal data straight from the
/// observed/expected disagreement definition over per-unit value counts.
/// units: one vector of 0/1 judgments per unit; units with < 2 judgments
/// are ignored. Returns 1 when expected disagreement is zero.
inline double alpha_naive(const std::vector<std::vector<int>>& units) {
  long double d_o_num = 0.0L;
  long double n_total = 0.0L, n0 = 0.0L, n1 = 0.0L;
  for (const auto& unit : units) {
    if (unit.size() < 2) continue;
    long double u0 = 0, u1 = 0;
    for (int v : unit) (v ? u1 : u0) += 1.0L;
    const long double m = u0 + u1;
    d_o_num += (u0 * u1 + u1 * u0) / (m - 1.0L);
    n_total += m;
    n0 += u0;
    n1 += u1;
  }
  if (n_total == 0.0L) throw std::runtime_error("alpha_naive: no usable units");
  const long double d_o = d_o_num / n_total;
  const long double d_e = (n0 * n1 + n1 * n0) / (n_total * (n_total - 1.0L));
  if (d_e == 0.0L) return 1.0;
  return static_cast<double>(1.0L - d_o / d_e);
}

/// Minimal weighted path length of any prefix-free binary code over the
/// given positive weights, by exhaustive search over merge orders.
inline std::uint64_t optimal_wpl(std::vector<std::uint64_t> weights) {
  // cost(merged tree) = sum over merges of the merged weight
  if (weights.size() < 2) throw std::runtime_error("optimal_wpl: need 2+ weights");
  struct Solver {
    std::map<std::vector<std::uint64_t>, std::uint64_t> memo;
    std::uint64_t solve(std::vector<std::uint64_t> w) {
      if (w.size() == 1) return 0;
      std::sort(w.begin(), w.end());
      auto it = memo.find(w);
      if (it != memo.end()) return it->second;
      std::uint64_t best = UINT64_MAX;
      for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) {
          std::vector<std::uint64_t> rest;
          rest.reserve(w.size() - 1);
          for (std::size_t k = 0; k < w.size(); ++k)
            if (k != i && k != j) rest.push_back(w[k]);
          rest.push_back(w[i] + w[j]);
          best = std::min(best, w[i] + w[j] + solve(std::move(rest)));
        }
      memo[w] = best;
      return best;
    }
  };
  return Solver{}.solve(std::move(weights));
}

/// Exact one-sided rank-sum p by enumerating every way the pooled sample
/// could have been split: P(U <= u_observed) under exchangeability.
inline double mw_less_enumerate(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size(), m = y.size();
  std::vector<double> pool(x);
  pool.insert(pool.end(), y.begin(), y.end());
  const auto u_of = [&](const std::vector<std::size_t>& idx) {
    // midrank-based U of the subset `idx` against the rest
    double u = 0.0;
    for (std::size_t i : idx)
      for (std::size_t j = 0; j < pool.size(); ++j) {
        bool in_subset = std::find(idx.begin(), idx.end(), j) != idx.end();
        if (in_subset) continue;
        if (pool[i] > pool[j]) u += 1.0;
        else if (pool[i] == pool[j]) u += 0.5;
      }
    return u;
  };
  std::vector<std::size_t> observed(n);
  std::iota(observed.begin(), observed.end(), 0);
  const double u_obs = u_of(observed);

  std::vector<bool> pick(pool.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
  std::sort(pick.begin(), pick.end());  // canonical start for next_permutation
  std::size_t total = 0, below = 0;
  do {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (pick[i]) idx.push_back(i);
    ++total;
    if (u_of(idx) <= u_obs + 1e-12) ++below;
  } while (std::next_permutation(pick.begin(), pick.end()));
  (void)m;
  return static_cast<double>(below) / static_cast<double>(total);
}

} // namespace oracle
