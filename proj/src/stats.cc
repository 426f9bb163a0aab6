// Copyright 2026 The hopsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hopsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hopsim {

namespace {

// Midranks of the pooled sample; also reports tie group sizes and whether
// any tie exists.
struct Ranked {
  std::vector<double> ranks;  // pooled order matches the input concatenation
  std::vector<std::size_t> tie_sizes;
  bool has_ties = false;
};

Ranked midranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> pooled;
  pooled.reserve(n);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return pooled[l] < pooled[r];
  });

  Ranked out;
  out.ranks.assign(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = midrank;
    out.tie_sizes.push_back(j - i + 1);
    if (j > i) out.has_ties = true;
    i = j + 1;
  }
  return out;
}

// P(U <= u_lim) under the exact null: counts n1-subsets of ranks {1..n} by
// rank sum with a subset-sum table.
double exact_cdf(std::size_t n1, std::size_t n, long long u_lim) {
  if (u_lim < 0) return 0.0;
  const std::size_t max_sum = n * (n + 1) / 2;
  // count[k][s] = number of k-subsets of {1..r} with rank sum s
  std::vector<std::vector<double>> count(
      n1 + 1, std::vector<double>(max_sum + 1, 0.0));
  count[0][0] = 1.0;
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::size_t k = std::min(n1, r); k >= 1; --k) {
      for (std::size_t s = max_sum; s >= r; --s) {
        count[k][s] += count[k - 1][s - r];
      }
    }
  }
  const long long offset = static_cast<long long>(n1 * (n1 + 1) / 2);
  double below = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    total += count[n1][s];
    if (static_cast<long long>(s) - offset <= u_lim) below += count[n1][s];
  }
  return below / total;
}

double normal_sf(double z) {  // P(Z > z)
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

RankTestResult mann_whitney_u(std::span<const double> a,
                              std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw EmptySample("mann_whitney_u: both samples must be nonempty");
  }
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  const Ranked ranked = midranks(a, b);

  double r1 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranked.ranks[i];

  RankTestResult res;
  res.u1 = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  res.u2 = static_cast<double>(n1) * static_cast<double>(n2) - res.u1;

  if (n <= 20 && !ranked.has_ties) {
    res.exact = true;
    const double u_min = std::min(res.u1, res.u2);
    // No ties: U is integral.
    const double p = 2.0 * exact_cdf(n1, n, std::llround(u_min));
    res.p_two_sided = std::min(1.0, p);
    return res;
  }

  const double n1d = static_cast<double>(n1);
  const double n2d = static_cast<double>(n2);
  const double nd = static_cast<double>(n);
  double tie_term = 0.0;
  for (std::size_t t : ranked.tie_sizes) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double mu = n1d * n2d / 2.0;
  const double var =
      n1d * n2d / 12.0 * ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
  if (var <= 0.0) {  // every value tied with every other
    res.p_two_sided = 1.0;
    return res;
  }
  const double sigma = std::sqrt(var);
  double z = 0.0;
  if (res.u1 > mu) {
    z = (res.u1 - mu - 0.5) / sigma;
  } else if (res.u1 < mu) {
    z = (res.u1 - mu + 0.5) / sigma;
  }
  res.z = z;
  res.p_two_sided = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
  return res;
}

}  // namespace hopsim
