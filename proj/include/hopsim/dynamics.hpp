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

#ifndef HOPSIM_DYNAMICS_HPP_
#define HOPSIM_DYNAMICS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "hopsim/behavior.hpp"
#include "hopsim/config.hpp"
#include "hopsim/material.hpp"
#include "hopsim/vec.hpp"

namespace hopsim {

// Raised when the integration produces a non-finite state or a spring
// deflection beyond its cap. Simulation faults, never silently clamped.
struct NumericalInstability : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mechanical model of the hopper, assembled once per run.
//
// Topology, hip to foot, along the leg axis u(theta, phi):
//
//   base (mass, inertia)                      p, phi
//     | force-controlled prismatic actuator   l_s in [travel_min, travel_max]
//   carriage (slider mass)                    travel-limit stop springs
//     | physical leg spring, in series with
//     | the first chain segment's spring      delta[0] (combined deflection)
//   node 0 (segment 1 mass)
//     | segment 2 spring/damper               delta[1]
//   node 1 ...
//     |
//   node n-1 = foot                           penalty contact acts here
//
// The series junction between leg spring and first segment spring is
// massless, so the two combine into one spring in the delta[0] slot; the
// material share of that deflection (delta*k_comb/k_1) is what the
// deflection cap checks. A rigid leg is the same structure with the chain
// collapsed to one lumped mass on the pure leg spring.
struct HopperModel {
  // masses
  double base_mass_kg = 0.0;
  double base_inertia_kg_m2 = 0.0;
  double carriage_mass_kg = 0.0;
  std::vector<double> node_mass_kg;  // chain nodes, foot last
  double total_mass_kg = 0.0;

  // chain springs; slot 0 is the leg-spring/segment-1 series combination
  std::vector<double> slot_stiffness_n_m;
  std::vector<double> slot_damping_n_s_m;
  std::vector<double> slot_rest_m;        // rest gap above each node
  std::vector<double> slot_material_share;  // k_comb/k_material, slot 0 only
  std::vector<double> material_cap_m;     // |material deflection| limit
  double spring_travel_cap_m = 0.0;       // leg-spring share limit, slot 0

  // actuator
  bool actuator_enabled = true;  // tests may pin l_s and drop the carriage
  double travel_min_m = 0.0;
  double travel_max_m = 0.0;
  double stop_stiffness_n_m = 0.0;
  double stop_damping_n_s_m = 0.0;
  double hip_offset_m = 0.0;

  // contact
  ContactConfig contact;
  Terrain terrain;

  double gravity_m_s2 = 9.81;
  // base z when standing at rest on flat ground, leg retracted; hop heights
  // are measured against this
  double standing_height_m = 0.0;
  double leg_length_m = 0.0;  // structural length, extended, no deflection

  int chain_size() const { return static_cast<int>(node_mass_kg.size()); }
};

// Generalized state. Chain deflections are state coordinates, one per slot.
struct HopperState {
  double t = 0.0;
  Vec3 p;       // base position, world
  Vec3 v;       // base velocity, world
  Vec3 phi;     // base attitude, XYZ Euler; yaw stays 0
  Vec3 phidot;
  double theta_x = 0.0;  // leg angles relative to the base
  double theta_y = 0.0;
  double thetadot_x = 0.0;
  double thetadot_y = 0.0;
  double l_s = 0.0;      // actuator extension
  double l_s_dot = 0.0;
  std::vector<double> delta;      // chain deflections, slot 0 first
  std::vector<double> delta_dot;
};

// Contact bookkeeping carried across steps (friction anchor) plus the forces
// of the step just taken.
struct ContactState {
  bool in_contact = false;
  Vec3 foot_position;
  Vec3 foot_velocity;
  Vec3 force;          // world frame, on the foot
  double fn = 0.0;     // normal component magnitude
  bool anchored = false;
  Vec3 anchor;         // friction anchor point on the surface
};

// Hip torques about the leg angles and the actuator thrust force.
struct ActuationInput {
  double tau1_n_m = 0.0;  // theta_x
  double tau2_n_m = 0.0;  // theta_y
  double tau3_n = 0.0;    // axial thrust
};

// Scratch carried by the integrator between steps (not part of the
// generalized state): the previous base acceleration for the axial frame
// terms, and the center of mass, which is the translational quantity
// actually integrated (the base position is slaved to it, so external
// forces move the COM exactly and internal forces never leak momentum).
// Reset whenever the state is modified outside step().
struct IntegratorScratch {
  Vec3 base_accel{0.0, 0.0, 0.0};
  Vec3 com_position{0.0, 0.0, 0.0};
  Vec3 com_velocity{0.0, 0.0, 0.0};
  bool initialized = false;
};

/// Assembles the model for a leg. The standing height and geometry derive
/// from the config's actuator and geometry sections.
HopperModel build_model(const Config& config, const SegmentedLeg& leg);

/// State standing at rest on the terrain under the base origin, plus the
/// configured settle drop and an optional small initial pitch.
HopperState initial_state(const HopperModel& model, double drop_height_m,
                          double tip_rad = 0.0);

/// Leg axis direction in world coordinates (unit vector, points hip->foot).
Vec3 leg_axis(const HopperState& state);

/// World foot position/velocity implied by the state.
Vec3 foot_position(const HopperModel& model, const HopperState& state);

/// Advances one step of semi-implicit Euler: velocities from forces at the
/// current configuration, then positions from the new velocities.
/// `contact` carries the friction anchor across steps and reports the
/// contact force of this step. Throws NumericalInstability on non-finite
/// state or a deflection beyond its cap.
void step(const HopperModel& model, HopperState& state, ContactState& contact,
          IntegratorScratch& scratch, const ActuationInput& input, double dt);

/// Total mechanical energy: kinetic of base, carriage and chain nodes plus
/// gravitational and spring potential. Contact and stop springs excluded.
double mechanical_energy(const HopperModel& model, const HopperState& state);

/// Total linear momentum of all bodies.
Vec3 linear_momentum(const HopperModel& model, const HopperState& state);

// -------------------------- recorded trajectory ---------------------------

// Decimated time series of one run. Column layout matches trace.csv.
struct SimTrace {
  std::vector<double> t;
  std::vector<double> p_x, p_y, p_z;
  std::vector<double> phi_x, phi_y, phi_z;
  std::vector<double> theta_x, theta_y, l_s;
  std::vector<double> v_x, v_y, v_z;
  std::vector<double> phidot_x, phidot_y, phidot_z;
  std::vector<double> thetadot_x, thetadot_y, l_s_dot;
  std::vector<double> tau1, tau2, tau3;
  std::vector<double> f_z;
  std::vector<int> phase;  // 1 = stance, 0 = flight

  double dt_s = 0.0;
  double sample_period_s = 0.0;
  double standing_height_m = 0.0;
  double terrain_grade = 0.0;
  std::string fingerprint;

  std::size_t size() const { return t.size(); }
};

struct PhaseEvents {
  std::vector<std::size_t> touchdowns;  // sample indices, strictly increasing
  std::vector<std::size_t> liftoffs;
  std::vector<std::size_t> apexes;      // vertical-rate sign flips in flight
};

struct EmptyTrace : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Touchdown/liftoff/apex indices from the recorded phase and vertical rate.
/// Phase flips shorter than the given minimum durations are ignored
/// (zero = keep every flip). Throws EmptyTrace on an empty trace.
PhaseEvents detect_phase_events(const SimTrace& trace, double min_stance_s,
                                double min_flight_s);

}  // namespace hopsim

#endif  // HOPSIM_DYNAMICS_HPP_
