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

#ifndef HOPSIM_CONFIG_HPP_
#define HOPSIM_CONFIG_HPP_

#include <string>
#include <vector>

#include "hopsim/material.hpp"

namespace hopsim {

// All tunables live here. Defaults below are the nominal setup; a JSON file
// with the same key names (SI units, unit suffix in the key) overrides any
// subset. See configs/default.json for the full schema.

struct GeometryConfig {
  double leg_length_m = 1.0;     // total chain length, split evenly
  double segment_radius_m = 0.02;
  int segment_count = 3;         // for mono-material legs
  double damping_ratio = 0.05;   // per-segment zeta
};

struct BaseConfig {
  double mass_kg = 10.0;
  // Per roll/pitch axis. Must stay well above the leg swing inertia of the
  // heaviest leg (about 3.4 kg m^2): in flight the hip torque reaction
  // rotates the base, and once leg inertia approaches base inertia the foot
  // placement servo turns into positive feedback on the world leg angle.
  double inertia_kg_m2 = 12.0;
};

struct ActuatorConfig {
  double carriage_mass_kg = 0.5;   // slider the leg spring seats against
  double spring_n_m = 5.0e3;       // physical leg spring
  double spring_damping_n_s_m = 30.0;
  double spring_travel_cap_m = 0.6;  // leg-spring deflection fault threshold
  double travel_min_m = 0.0;       // l_s range
  double travel_max_m = 0.25;
  double stop_stiffness_n_m = 2.0e4;
  double stop_damping_n_s_m = 100.0;
  double hip_offset_m = 0.05;      // hip to actuator zero
  double seat_gap_m = 0.05;        // carriage to first chain node at rest
};

struct ContactConfig {
  double stiffness_n_m = 1.0e5;
  double damping_n_s_m = 1.0e3;
  double friction_mu = 0.8;
  double tangential_stiffness_n_m = 3.0e4;
  double tangential_damping_n_s_m = 300.0;
};

struct ControllerConfig {
  double stance_period_s = 0.17;        // T_ST seed
  double stance_period_ema_alpha = 0.3;
  int stance_period_warmup_hops = 3;    // hops before the EMA runs
  // Foot placement velocity gain. The ceiling is set by the soft catalog
  // legs on the circular track: much past this value their velocity loop
  // rings until the base tips over or the leg spring bottoms out.
  double k1_s = 0.06;
  // The position loop must run well below the once-per-hop velocity loop,
  // or the command saturates and the hopper orbits its reference.
  double k2 = 0.15;                     // position -> velocity command
  double k3 = 0.75;                     // velocity command smoothing
  double max_speed_m_s = 0.8;
  // The position error is taken against the reference this far ahead,
  // cancelling the loop's phase lag on moving references.
  double reference_lead_s = 1.0;
  // Flight PD must settle the slowest leg within one ballistic flight
  // (about 0.8 s); the heaviest catalog leg swings near 4.7 kg m^2 once the
  // base reaction is folded in, so the pair below gives it 9 rad/s at
  // damping ratio 0.7 while lighter legs run overdamped.
  double flight_kp_n_m_rad = 380.0;
  double flight_kd_n_m_s_rad = 60.0;
  // Stance PD drains the attitude kick each flight's leg re-aim leaves on
  // the base. Righting torque reacts through the anchored foot as a lateral
  // ground force, so the gains stay moderate: strong righting rows the body
  // downrange hop after hop and outruns the placement loop.
  double stance_kp_n_m_rad = 200.0;
  double stance_kd_n_m_s_rad = 59.0;
  double hop_gain_n_m = 120.0;          // thrust adaptation K
  double hop_height_des_m = 1.0;
  double thrust_initial_n = 300.0;
  double tau_hip_max_n_m = 150.0;       // admissible |tau1|, |tau2|
  double tau_thrust_max_n = 1500.0;     // admissible tau3 in [0, max]
  double control_tick_s = 0.01;         // velocity-command update period
  // Foot target clamp vs leg length. Kept small so a saturated sprint still
  // touches down at a modest leg angle instead of a tumbling one.
  double reach_fraction = 0.4;
  // Hip swing cone half-angle. When base tilt carries the foot target
  // outside the envelope, the commanded leg angles pin to this edge.
  double swing_limit_rad = 1.2;
  // Phase debounce: contact flips must persist this long to count. The
  // flight window sits between landing-rebound chatter (< 0.1 s) and real
  // ballistic flights (> 0.35 s), so micro-bounces stay stance-internal.
  double min_stance_s = 0.02;
  double min_flight_s = 0.2;
  // The placement servo engages only once the foot is this far off the
  // ground; stance force dropouts leave the foot at the surface.
  double foot_clearance_m = 0.01;
};

struct SimConfig {
  double gravity_m_s2 = 9.81;
  double duration_s = 60.0;
  double cutoff_s = 20.0;            // transient discarded by metrics
  double dt_s = 0.0;                 // 0 = automatic per material
  double auto_dt_fraction = 0.5;     // dt = fraction * measured max stable dt
  double sample_period_s = 1.0e-3;   // trace decimation target
  double drop_height_m = 0.02;       // initial settle drop
  // Small initial pitch so every run starts from a generic perturbed
  // posture; a perfectly vertical start never leaves the degenerate
  // in-place bounce and hides the lateral dynamics entirely.
  double initial_tip_rad = 0.02;
  double apex_blowup_factor = 10.0;  // apex > factor*h_des counts unstable
};

struct StabilityConfig {
  double ladder_top_s = 5.0e-2;
  double ladder_bottom_s = 1.0e-5;
  double ladder_factor = 3.1622776601683795;  // sqrt(10)
  double bisect_rel_tol = 0.05;
  double trial_duration_s = 10.0;
  int grid_rows = 20;  // density axis
  int grid_cols = 20;  // modulus axis
  double grid_density_min_kg_m3 = 5.0e2;
  double grid_density_max_kg_m3 = 2.25e4;
  double grid_modulus_min_pa = 0.1e9;
  double grid_modulus_max_pa = 1000.0e9;
};

struct BehaviorConfig {
  double forward_speed_m_s = 0.5;
  double ramp_grade = 0.035;        // rise over run
  double circle_radius_m = 0.5;
  double circle_speed_m_s = 0.3;
};

struct SweepConfig {
  // density sweep at fixed modulus; includes the 50% porosity pair 8000/4000
  std::vector<double> density_values_kg_m3{2000.0, 4000.0, 8000.0, 16000.0};
  double density_sweep_modulus_pa = 69.0e9;
  // modulus sweep at fixed density; crosses the 9 -> 20 GPa class gap
  std::vector<double> modulus_values_pa{1.0e9, 3.0e9, 9.0e9, 20.0e9, 69.0e9,
                                        200.0e9};
  double modulus_sweep_density_kg_m3 = 2500.0;
  // rho-only gradients hold this modulus for every segment
  double gradient_modulus_pa = 200.0e9;
  std::vector<double> gradient_densities_kg_m3{1390.0, 4430.0, 8000.0};
};

struct HarnessConfig {
  int workers = 4;
};

struct Config {
  GeometryConfig geometry;
  BaseConfig base;
  ActuatorConfig actuator;
  ContactConfig contact;
  ControllerConfig controller;
  SimConfig sim;
  StabilityConfig stability;
  BehaviorConfig behavior;
  SweepConfig sweep;
  HarnessConfig harness;
  MaterialCatalog catalog;
};

/// Nominal configuration: the five-material catalog (md, pvc, al, ti, ss)
/// and the defaults above.
Config default_config();

/// Loads a JSON config file. Keys present in the file override defaults;
/// everything else keeps its default. Throws std::invalid_argument on
/// malformed input or on catalog entries outside their Ashby class.
Config load_config(const std::string& path);

/// Serializes a config to the canonical JSON document (sorted keys).
std::string config_to_json(const Config& config);

/// FNV-1a 64-bit hash of the canonical JSON, as 16 hex digits. Identical
/// fingerprints mean identical effective configs.
std::string config_fingerprint(const Config& config);

}  // namespace hopsim

#endif  // HOPSIM_CONFIG_HPP_
