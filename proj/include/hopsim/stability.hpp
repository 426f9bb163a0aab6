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

#ifndef HOPSIM_STABILITY_HPP_
#define HOPSIM_STABILITY_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hopsim/config.hpp"
#include "hopsim/material.hpp"

namespace hopsim {

// Every rung of the probe ladder failed, including the smallest.
struct AllUnstable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A stability trial: runs the system of interest at the given timestep and
/// reports whether the integration stayed stable.
using TrialFn = std::function<bool(double dt_s)>;

// Record of one max-stable-dt search: every (dt, stable) verdict evaluated,
// in evaluation order. Stability should be downward-closed in dt; a stable
// verdict above an unstable one is an integrator anomaly worth flagging.
struct StabilityProbe {
  std::vector<std::pair<double, bool>> verdicts;
  double dt_max_s = 0.0;

  // True when some recorded stable dt exceeds a recorded unstable dt.
  bool anomaly() const;
};

/// Largest stable timestep: walks a geometric ladder from
/// probe_config.ladder_top_s down to ladder_bottom_s, then bisects between
/// the last unstable and first stable rungs until the bracket is within
/// bisect_rel_tol, returning the stable end. A stable top rung is returned
/// as-is. Throws AllUnstable when every rung fails.
double max_stable_dt(const TrialFn& trial, const StabilityConfig& probe_config,
                     StabilityProbe* probe = nullptr);

/// Trial for an isolated mass-spring oscillator integrated with the same
/// semi-implicit scheme as the full model: velocity kick, then position
/// drift. Stable when the amplitude never exceeds 1e3 times the start.
TrialFn oscillator_trial(double mass_kg, double stiffness_n_m, double zeta,
                         double duration_s);

/// Standardized whole-robot trial: static hopping with nominal gains for
/// config.stability.trial_duration_s. Stable when the run finishes without
/// a fault (non-finite state, deflection cap, apex runaway).
TrialFn hopping_trial(const Config& config, const SegmentedLeg& leg);

/// Mono-material convenience wrapper over the leg trial.
TrialFn hopping_trial(const Config& config, const MaterialSpec& material);

// Max stable timestep over a log-spaced (density, modulus) grid.
struct StabilityGrid {
  std::vector<double> density_kg_m3;  // row axis
  std::vector<double> modulus_pa;     // column axis
  // dt_max[row*cols + col]; NaN marks a cell that was unstable at every
  // ladder rung.
  std::vector<double> dt_max_s;

  std::size_t rows() const { return density_kg_m3.size(); }
  std::size_t cols() const { return modulus_pa.size(); }
  double at(std::size_t row, std::size_t col) const {
    return dt_max_s[row * cols() + col];
  }
};

/// Observer for long sweeps; called under a lock with the grid so far and
/// the number of cells finished this run.
using GridProgress = std::function<void(const StabilityGrid&, int)>;

/// Evaluates max_stable_dt for every cell of the configured grid, fanning
/// cells out over `workers` threads (values < 1 mean one). Deterministic:
/// cell results depend only on the cell, never on scheduling. Cells whose
/// axis values match `seed` (relative 1e-9) and hold a finite value there
/// are carried over instead of recomputed.
StabilityGrid sweep_grid(const Config& config, int workers,
                         const StabilityGrid* seed = nullptr,
                         const GridProgress& progress = {});

/// Least-squares plane through the finite grid cells in log10 space:
/// log10(dt) = intercept + density_slope*log10(rho) + modulus_slope*log10(E).
struct LogLogFit {
  double intercept = 0.0;
  double density_slope = 0.0;
  double modulus_slope = 0.0;
  double r_squared = 0.0;
  std::size_t cells_used = 0;
};

/// Throws std::invalid_argument when fewer than three finite cells exist.
LogLogFit fit_grid(const StabilityGrid& grid);

/// CSV export, one row per cell: rho_kg_m3, modulus_pa, dt_max_s
/// (NaN cells written as "nan").
void write_grid_csv(const std::string& path, const StabilityGrid& grid);

/// Inverse of write_grid_csv; reassembles the axes from the row order.
/// Throws std::runtime_error on malformed input.
StabilityGrid read_grid_csv(const std::string& path);

}  // namespace hopsim

#endif  // HOPSIM_STABILITY_HPP_
