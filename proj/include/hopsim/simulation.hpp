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

#ifndef HOPSIM_SIMULATION_HPP_
#define HOPSIM_SIMULATION_HPP_

#include <string>
#include <vector>

#include "hopsim/behavior.hpp"
#include "hopsim/config.hpp"
#include "hopsim/dynamics.hpp"
#include "hopsim/material.hpp"

namespace hopsim {

// Outcome of one closed-loop run. A run that faults keeps the trace up to
// the fault so the failure can be inspected.
struct RunResult {
  SimTrace trace;
  bool unstable = false;
  std::string fault;                // empty unless unstable
  double max_hop_height_m = 0.0;    // apex above standing height, whole run
  HopperState final_state;
};

/// Mono-material leg from the configured geometry.
SegmentedLeg mono_leg(const Config& config, const MaterialSpec& material);

/// One segment per listed material, hip to foot.
SegmentedLeg gradient_leg(const Config& config,
                          const std::vector<MaterialSpec>& materials);

// Integration step snapped so that a whole number of steps spans one trace
// sample, which keeps every recorded trace on the same uniform grid.
struct DtResolution {
  double dt_s = 0.0;
  int steps_per_sample = 1;
};

/// Largest dt at or below the request that divides the sample period evenly;
/// requests at or above the sample period snap down to it.
DtResolution resolve_dt(double requested_dt_s, double sample_period_s);

/// Closed-loop run of one leg on one behavior at a fixed dt for
/// config.sim.duration_s. The trace is decimated to about
/// config.sim.sample_period_s. Faults (numerical instability, apex runaway
/// past config.sim.apex_blowup_factor times the hop target) stop the run
/// and are reported in the result rather than thrown.
RunResult run_simulation(const Config& config, const SegmentedLeg& leg,
                         const BehaviorSpec& behavior, double dt_s);

/// Plain CSV with one column per trace field; doubles round-trip exactly.
void write_trace_csv(const std::string& path, const SimTrace& trace);

/// Inverse of write_trace_csv. Throws std::runtime_error on malformed input.
SimTrace read_trace_csv(const std::string& path);

}  // namespace hopsim

#endif  // HOPSIM_SIMULATION_HPP_
