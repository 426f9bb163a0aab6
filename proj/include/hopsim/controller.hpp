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

#ifndef HOPSIM_CONTROLLER_HPP_
#define HOPSIM_CONTROLLER_HPP_

#include <stdexcept>

#include "hopsim/behavior.hpp"
#include "hopsim/config.hpp"
#include "hopsim/dynamics.hpp"
#include "hopsim/vec.hpp"

namespace hopsim {

// ----------------------------- pure control laws ---------------------------

/// Desired horizontal foot offset from the hip: the neutral point for the
/// current velocity plus a proportional correction toward the commanded
/// velocity.
Vec2 foot_placement(const Vec2& velocity, const Vec2& velocity_cmd,
                    double stance_period_s, double k1_s);

/// Velocity command recursion: proportional pull toward the reference
/// position blended with the previous command, then norm-limited.
Vec2 desired_velocity(const Vec2& position_error, const Vec2& previous_cmd,
                      double k2, double k3, double max_speed_m_s);

/// Flight-phase servo on a leg angle: restoring torque on the leg.
double flight_leg_pd(double angle_error_rad, double angle_rate_rad_s,
                     double kp_n_m_rad, double kd_n_m_s_rad);

/// Stance-phase attitude law: torque applied to the leg whose reaction on
/// the base opposes the attitude error. Note the sign is opposite to the
/// flight law; the base is righted through the hip while the foot is loaded.
double stance_attitude_pd(double attitude_error_rad, double attitude_rate_rad_s,
                          double kp_n_m_rad, double kd_n_m_s_rad);

/// One thrust adaptation step: previous force plus a proportional correction
/// on the apex-height error, clamped to the admissible range.
double thrust_update(double previous_n, double gain_n_m, double height_des_m,
                     double height_meas_m, double min_n, double max_n);

struct LegAngles {
  double theta_x = 0.0;
  double theta_y = 0.0;
};

// Foot target that no leg pose can reach.
struct Unreachable : std::domain_error {
  using std::domain_error::domain_error;
};

/// Leg angles that put the foot at the given horizontal offset from the hip
/// (world frame), accounting for the base attitude, with the foot below the
/// hip at the given leg length. Throws Unreachable when the offset is at or
/// beyond the leg length, or when the attitude turns the solution upward.
LegAngles leg_ik(const Vec2& target_xy_world, const Vec3& base_attitude,
                 double leg_length_m);

// ------------------------------- controller --------------------------------

enum class ControlPhase { Flight, Stance };

// Hopping controller: placement servo in flight, attitude servo plus one
// thrust pulse in stance, velocity command updated on a fixed tick so the
// command trajectory does not depend on the integration step.
class Controller {
 public:
  Controller(const ControllerConfig& config, const BehaviorSpec& behavior,
             const Terrain& terrain, double leg_length_m,
             double standing_height_m);

  /// Torques for the step starting at state.t. Call once per step.
  ActuationInput update(const HopperState& state, const ContactState& contact);

  ControlPhase phase() const { return phase_; }
  Vec2 velocity_command() const { return velocity_cmd_; }
  double stance_period_estimate_s() const { return stance_period_s_; }
  double thrust_force_n() const { return thrust_n_; }
  double last_apex_m() const { return last_apex_m_; }
  int completed_hops() const { return hops_; }

 private:
  double hop_height(const HopperState& state) const;

  ControllerConfig cfg_;
  BehaviorSpec behavior_;
  Terrain terrain_;
  double leg_length_m_;
  double standing_height_m_;

  ControlPhase phase_ = ControlPhase::Flight;
  double phase_since_s_ = -1.0e9;
  // Candidate phase change awaiting its debounce hold. Brief contact
  // dropouts and touchdown bounces never reach the hold time, so they do
  // not produce hop cycles.
  bool pending_active_ = false;
  double pending_since_s_ = 0.0;
  double next_tick_s_ = 0.0;
  Vec2 velocity_cmd_{0.0, 0.0};
  double stance_period_s_;
  double thrust_n_;
  bool thrust_latched_ = false;
  double last_apex_m_;
  double apex_track_m_ = 0.0;
  int hops_ = 0;
};

}  // namespace hopsim

#endif  // HOPSIM_CONTROLLER_HPP_
