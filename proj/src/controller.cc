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

#include "hopsim/controller.hpp"

#include <algorithm>
#include <cmath>

namespace hopsim {

Vec2 foot_placement(const Vec2& velocity, const Vec2& velocity_cmd,
                    double stance_period_s, double k1_s) {
  return velocity * (0.5 * stance_period_s) +
         (velocity - velocity_cmd) * k1_s;
}

Vec2 desired_velocity(const Vec2& position_error, const Vec2& previous_cmd,
                      double k2, double k3, double max_speed_m_s) {
  Vec2 cmd = position_error * -k2 + previous_cmd * k3;
  const double speed = cmd.norm();
  if (speed > max_speed_m_s && speed > 0.0) {
    cmd = cmd * (max_speed_m_s / speed);
  }
  return cmd;
}

double flight_leg_pd(double angle_error_rad, double angle_rate_rad_s,
                     double kp_n_m_rad, double kd_n_m_s_rad) {
  return -kp_n_m_rad * angle_error_rad - kd_n_m_s_rad * angle_rate_rad_s;
}

double stance_attitude_pd(double attitude_error_rad,
                          double attitude_rate_rad_s, double kp_n_m_rad,
                          double kd_n_m_s_rad) {
  return kp_n_m_rad * attitude_error_rad + kd_n_m_s_rad * attitude_rate_rad_s;
}

double thrust_update(double previous_n, double gain_n_m, double height_des_m,
                     double height_meas_m, double min_n, double max_n) {
  const double next = previous_n + gain_n_m * (height_des_m - height_meas_m);
  return std::clamp(next, min_n, max_n);
}

namespace {

// Rotate a world-frame vector into the base frame: Rx(-phi_x) * Ry(-phi_y).
Vec3 world_to_base(const Vec3& v, const Vec3& base_attitude) {
  const double cx = std::cos(base_attitude.x), sx = std::sin(base_attitude.x);
  const double cy = std::cos(base_attitude.y), sy = std::sin(base_attitude.y);
  const Vec3 a{cy * v.x - sy * v.z, v.y, sy * v.x + cy * v.z};
  return {a.x, cx * a.y + sx * a.z, -sx * a.y + cx * a.z};
}

// Leg angles from a base-frame hip->foot direction. The axis in the base
// frame is (sin ty cos tx, sin tx, -cos ty cos tx).
LegAngles angles_from_base_dir(const Vec3& d_b) {
  const double s_tx = std::clamp(d_b.y, -1.0, 1.0);
  const double theta_x = std::asin(s_tx);
  const double theta_y = std::atan2(d_b.x, -d_b.z);
  return {theta_x, theta_y};
}

// Angles that swing the leg toward a world-frame ground target, clamped
// into the hip's swing cone. Unlike leg_ik this never rejects: when base
// tilt carries the target outside the leg's envelope, the leg is driven to
// the cone edge on that side, which is all the hardware could do anyway.
LegAngles clamped_leg_angles(const Vec2& target_xy_world,
                             const Vec3& base_attitude, double leg_length_m,
                             double swing_limit_rad) {
  const double r2 = target_xy_world.dot(target_xy_world);
  const double l2 = leg_length_m * leg_length_m;
  const double inv_l = 1.0 / leg_length_m;
  const double drop = std::sqrt(std::max(l2 - r2, 0.0)) * inv_l;
  const Vec3 d_w{target_xy_world.x * inv_l, target_xy_world.y * inv_l, -drop};
  const LegAngles raw = angles_from_base_dir(world_to_base(d_w, base_attitude));
  return {std::clamp(raw.theta_x, -swing_limit_rad, swing_limit_rad),
          std::clamp(raw.theta_y, -swing_limit_rad, swing_limit_rad)};
}

}  // namespace

LegAngles leg_ik(const Vec2& target_xy_world, const Vec3& base_attitude,
                 double leg_length_m) {
  if (!(leg_length_m > 0.0)) {
    throw std::invalid_argument("leg_ik: leg length must be positive");
  }
  const double r2 = target_xy_world.dot(target_xy_world);
  const double l2 = leg_length_m * leg_length_m;
  if (r2 >= l2) {
    throw Unreachable("foot target beyond leg reach");
  }
  // world direction hip->foot, then into the base frame
  const double inv_l = 1.0 / leg_length_m;
  const Vec3 d_w{target_xy_world.x * inv_l, target_xy_world.y * inv_l,
                 -std::sqrt(l2 - r2) * inv_l};
  const Vec3 d_b = world_to_base(d_w, base_attitude);
  if (d_b.z >= 0.0) {
    throw Unreachable("foot target not below the hip");
  }
  return angles_from_base_dir(d_b);
}

Controller::Controller(const ControllerConfig& config,
                       const BehaviorSpec& behavior, const Terrain& terrain,
                       double leg_length_m, double standing_height_m)
    : cfg_(config),
      behavior_(behavior),
      terrain_(terrain),
      leg_length_m_(leg_length_m),
      standing_height_m_(standing_height_m),
      stance_period_s_(config.stance_period_s),
      thrust_n_(config.thrust_initial_n),
      last_apex_m_(config.hop_height_des_m) {}

double Controller::hop_height(const HopperState& s) const {
  return s.p.z - terrain_.height(s.p.x, s.p.y) - standing_height_m_;
}

ActuationInput Controller::update(const HopperState& s,
                                  const ContactState& contact) {
  const double t = s.t;

  // Velocity command on its own fixed tick. The error is taken against a
  // lead point on the reference so a moving target is met, not chased.
  while (t >= next_tick_s_ - 1.0e-12) {
    const Vec2 error =
        s.p.xy() -
        reference_position(behavior_, t + cfg_.reference_lead_s);
    velocity_cmd_ = desired_velocity(error, velocity_cmd_, cfg_.k2, cfg_.k3,
                                     cfg_.max_speed_m_s);
    next_tick_s_ += cfg_.control_tick_s;
  }

  // Phase machine: a raw contact flip must hold for the new phase's
  // debounce time before the transition commits, so brief mid-stance force
  // dropouts and touchdown bounces never register as hop cycles. Commits
  // are backdated to the flip onset.
  const bool loaded = contact.fn > 0.0;
  const ControlPhase raw =
      loaded ? ControlPhase::Stance : ControlPhase::Flight;
  if (raw == phase_) {
    pending_active_ = false;
  } else {
    if (!pending_active_) {
      pending_active_ = true;
      pending_since_s_ = t;
    }
    const double need = raw == ControlPhase::Stance ? cfg_.min_stance_s
                                                    : cfg_.min_flight_s;
    if (t - pending_since_s_ >= need - 1.0e-12) {
      if (raw == ControlPhase::Flight) {
        const double duration = pending_since_s_ - phase_since_s_;
        ++hops_;
        if (hops_ > cfg_.stance_period_warmup_hops) {
          const double a = cfg_.stance_period_ema_alpha;
          stance_period_s_ = (1.0 - a) * stance_period_s_ + a * duration;
        }
        apex_track_m_ = hop_height(s);
        thrust_latched_ = false;
      } else {
        if (hops_ > 0) last_apex_m_ = apex_track_m_;
      }
      phase_ = raw;
      phase_since_s_ = pending_since_s_;
      pending_active_ = false;
    }
  }
  if (phase_ == ControlPhase::Flight) {
    apex_track_m_ = std::max(apex_track_m_, hop_height(s));
  }

  // Torque law keyed on foot clearance, not on the debounced phase: the
  // placement servo may only act with the foot well clear of the ground
  // (during a mid-stance force dropout it would row the anchored leg and
  // pump the body downrange), while attitude righting starts the instant
  // the foot is down. The debounced phase governs cycle bookkeeping only.
  const double clearance =
      contact.foot_position.z -
      terrain_.height(contact.foot_position.x, contact.foot_position.y);
  const bool airborne = !loaded && clearance > cfg_.foot_clearance_m;
  ActuationInput out;
  if (airborne) {
    // place the foot for the upcoming touchdown
    Vec2 target = foot_placement(s.v.xy(), velocity_cmd_, stance_period_s_,
                                 cfg_.k1_s);
    const double reach = cfg_.reach_fraction * leg_length_m_;
    const double r = target.norm();
    if (r > reach && r > 0.0) target = target * (reach / r);
    const LegAngles des = clamped_leg_angles(target, s.phi, leg_length_m_,
                                             cfg_.swing_limit_rad);
    out.tau1_n_m = flight_leg_pd(s.theta_x - des.theta_x, s.thetadot_x,
                                 cfg_.flight_kp_n_m_rad,
                                 cfg_.flight_kd_n_m_s_rad);
    out.tau2_n_m = flight_leg_pd(s.theta_y - des.theta_y, s.thetadot_y,
                                 cfg_.flight_kp_n_m_rad,
                                 cfg_.flight_kd_n_m_s_rad);
  } else {
    out.tau1_n_m = stance_attitude_pd(s.phi.x, s.phidot.x,
                                      cfg_.stance_kp_n_m_rad,
                                      cfg_.stance_kd_n_m_s_rad);
    out.tau2_n_m = stance_attitude_pd(s.phi.y, s.phidot.y,
                                      cfg_.stance_kp_n_m_rad,
                                      cfg_.stance_kd_n_m_s_rad);

    // Thrust fires whenever the hopper is loaded and already moving up: in
    // a normal cycle that is one sustained burn per stance, and in a
    // low-hop chatter every rebound gets a kick, so the hopper climbs back
    // out instead of grinding. The magnitude adapts to the previous apex
    // once per confirmed cycle.
    if (loaded && s.v.z > 0.0) {
      if (!thrust_latched_ && phase_ == ControlPhase::Stance) {
        thrust_latched_ = true;
        thrust_n_ = thrust_update(thrust_n_, cfg_.hop_gain_n_m,
                                  cfg_.hop_height_des_m, last_apex_m_, 0.0,
                                  cfg_.tau_thrust_max_n);
      }
      out.tau3_n = thrust_n_;
    }
  }

  out.tau1_n_m = std::clamp(out.tau1_n_m, -cfg_.tau_hip_max_n_m,
                            cfg_.tau_hip_max_n_m);
  out.tau2_n_m = std::clamp(out.tau2_n_m, -cfg_.tau_hip_max_n_m,
                            cfg_.tau_hip_max_n_m);
  return out;
}

}  // namespace hopsim
