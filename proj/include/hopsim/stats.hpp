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

#ifndef HOPSIM_STATS_HPP_
#define HOPSIM_STATS_HPP_

#include <span>
#include <stdexcept>

namespace hopsim {

struct EmptySample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RankTestResult {
  double u1 = 0.0;          // U statistic of the first sample
  double u2 = 0.0;          // n1*n2 - u1
  double p_two_sided = 1.0;
  bool exact = false;       // exact null enumeration vs normal approximation
  double z = 0.0;           // approximation path only
};

/// Two-sided Mann-Whitney U rank test. Ties get midranks. The null
/// distribution is enumerated exactly when n1 + n2 <= 20 and there are no
/// ties (two-sided p = 2*P(U <= min(u1, u2)), clamped to 1); otherwise the
/// normal approximation with tie and continuity corrections is used.
/// Degenerate spread (all values tied) yields p = 1.
/// Throws EmptySample when either sample is empty.
RankTestResult mann_whitney_u(std::span<const double> a,
                              std::span<const double> b);

}  // namespace hopsim

#endif  // HOPSIM_STATS_HPP_
