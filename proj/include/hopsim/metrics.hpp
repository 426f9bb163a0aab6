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

#ifndef HOPSIM_METRICS_HPP_
#define HOPSIM_METRICS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "hopsim/behavior.hpp"
#include "hopsim/dynamics.hpp"

namespace hopsim {

// One hop cycle: touchdown to the next touchdown, as sample indices.
struct HopCycle {
  int index = 0;
  std::size_t begin = 0;  // first sample (a touchdown)
  std::size_t end = 0;    // one past the last sample (the next touchdown)
  double t0_s = 0.0;
  double tf_s = 0.0;
  std::size_t samples() const { return end - begin; }
};

struct HopCycleMetrics {
  int cycle_index = 0;
  double t0_s = 0.0;
  double tf_s = 0.0;
  double power_w = 0.0;           // mean norm of per-actuator power
  double tracking_error_m = 0.0;  // mean planar distance to the reference
  double jerk_m_s3 = 0.0;         // mean |third derivative| of base height
  double hop_height_m = 0.0;      // apex above standing height
};

struct MetricSummary {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct MetricsReport {
  std::vector<HopCycleMetrics> cycles;
  MetricSummary power;
  MetricSummary tracking_error;
  MetricSummary jerk;
  MetricSummary hop_height;
  std::string fingerprint;
};

struct NoCycles : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CycleTooShort : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Hop cycles delimited touchdown-to-touchdown, the first one starting at
/// the first touchdown at or after the cutoff. Phase flips shorter than the
/// debounce windows are not touchdowns. Throws NoCycles when fewer than two
/// touchdowns remain.
std::vector<HopCycle> segment_cycles(const SimTrace& trace, double cutoff_s,
                                     double min_stance_s = 0.02,
                                     double min_flight_s = 0.2);

/// Zero-phase second-order Butterworth low-pass (forward-backward pass with
/// reflected end padding). Throws std::invalid_argument for cutoffs outside
/// (0, sample_rate/2).
std::vector<double> lowpass_zero_phase(const std::vector<double>& x,
                                       double cutoff_hz,
                                       double sample_rate_hz);

/// Mean over the cycle of ||(tau1*thetadot_x, tau2*thetadot_y,
/// tau3*l_s_dot)||_2.
double cycle_power(const SimTrace& trace, const HopCycle& cycle);

/// Mean over the cycle of the planar distance between the base and the
/// behavior reference.
double cycle_tracking_error(const SimTrace& trace, const HopCycle& cycle,
                            const BehaviorSpec& behavior);

/// Apex of the cycle: max base height above standing height and terrain.
double cycle_hop_height(const SimTrace& trace, const HopCycle& cycle);

/// Third derivative of base height for the whole trace: low-pass at
/// cutoff_hz, then a five-point central difference. The two samples at each
/// end, where the stencil does not fit, are NaN.
std::vector<double> jerk_series(const SimTrace& trace,
                                double cutoff_hz = 50.0);

/// Mean |jerk| over the cycle's finite stencil points. Throws CycleTooShort
/// for cycles under 7 samples.
double cycle_jerk(const std::vector<double>& jerk, const HopCycle& cycle);

/// Quantile with linear interpolation between order statistics (the
/// (n-1)*q convention). Throws EmptyInput on an empty list.
double quantile(std::vector<double> values, double q);

MetricSummary summarize(const std::vector<double>& values);

/// Full pipeline: segment, per-cycle metrics, summaries.
MetricsReport compute_metrics(const SimTrace& trace,
                              const BehaviorSpec& behavior, double cutoff_s,
                              double min_stance_s = 0.02,
                              double min_flight_s = 0.2);

/// One row per cycle; doubles round-trip exactly.
void write_metrics_csv(const std::string& path, const MetricsReport& report);

/// Reads the per-cycle rows back and recomputes the summaries.
MetricsReport read_metrics_csv(const std::string& path);

}  // namespace hopsim

#endif  // HOPSIM_METRICS_HPP_
