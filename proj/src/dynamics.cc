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

#include "hopsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopsim {

namespace {

struct LegAxis {
  Vec3 u;        // unit vector hip->foot, world
  Vec3 du_dthx;  // partials of u wrt the leg angles, world
  Vec3 du_dthy;
};

Vec3 rotate_xy(const Vec3& phi, const Vec3& v) {
  // R = Ry(phi_y) * Rx(phi_x); yaw is frozen at zero.
  const double cx = std::cos(phi.x), sx = std::sin(phi.x);
  const double cy = std::cos(phi.y), sy = std::sin(phi.y);
  const Vec3 a{v.x, cx * v.y - sx * v.z, sx * v.y + cx * v.z};
  return {cy * a.x + sy * a.z, a.y, -sy * a.x + cy * a.z};
}

LegAxis leg_axis_frame(const HopperState& s) {
  const double cx = std::cos(s.theta_x), sx = std::sin(s.theta_x);
  const double cy = std::cos(s.theta_y), sy = std::sin(s.theta_y);
  // Body-frame axis; theta_x tips the foot toward +y, theta_y toward +x.
  const Vec3 u_b{sy * cx, sx, -cy * cx};
  const Vec3 dthx_b{-sy * sx, cx, cy * sx};
  const Vec3 dthy_b{cy * cx, 0.0, sy * cx};
  return {rotate_xy(s.phi, u_b), rotate_xy(s.phi, dthx_b),
          rotate_xy(s.phi, dthy_b)};
}

Vec3 axis_rate(const LegAxis& axis, const HopperState& s) {
  const Vec3 omega{s.phidot.x, s.phidot.y, 0.0};
  return omega.cross(axis.u) + axis.du_dthx * s.thetadot_x +
         axis.du_dthy * s.thetadot_y;
}

// Axial node layout: carriage first (when enabled), then chain nodes.
struct AxialLayout {
  double s_carriage = 0.0;
  double sdot_carriage = 0.0;
  std::vector<double> s;     // chain nodes
  std::vector<double> sdot;
};

AxialLayout axial_layout(const HopperModel& m, const HopperState& st) {
  AxialLayout lay;
  double pos = m.hip_offset_m;
  double rate = 0.0;
  if (m.actuator_enabled) {
    pos += st.l_s;
    rate = st.l_s_dot;
    lay.s_carriage = pos;
    lay.sdot_carriage = rate;
  }
  const int n = m.chain_size();
  lay.s.resize(n);
  lay.sdot.resize(n);
  for (int i = 0; i < n; ++i) {
    pos += m.slot_rest_m[i] + st.delta[i];
    rate += st.delta_dot[i];
    lay.s[i] = pos;
    lay.sdot[i] = rate;
  }
  return lay;
}

// Viscous force clamped so it cannot reverse the relative velocity it acts
// on within one step; keeps stiff dampers from bounding the stable dt.
double clamped_damping(double c, double v, double mass, double dt) {
  const double raw = c * v;
  const double limit = mass * std::abs(v) / dt;
  return std::clamp(raw, -limit, limit);
}

void check_finite(const HopperState& s) {
  bool ok = std::isfinite(s.p.x) && std::isfinite(s.p.y) &&
            std::isfinite(s.p.z) && std::isfinite(s.v.x) &&
            std::isfinite(s.v.y) && std::isfinite(s.v.z) &&
            std::isfinite(s.phi.x) && std::isfinite(s.phi.y) &&
            std::isfinite(s.phidot.x) && std::isfinite(s.phidot.y) &&
            std::isfinite(s.theta_x) && std::isfinite(s.theta_y) &&
            std::isfinite(s.thetadot_x) && std::isfinite(s.thetadot_y) &&
            std::isfinite(s.l_s) && std::isfinite(s.l_s_dot);
  for (double d : s.delta) ok = ok && std::isfinite(d);
  for (double d : s.delta_dot) ok = ok && std::isfinite(d);
  if (!ok) throw NumericalInstability("non-finite state");
}

}  // namespace

HopperModel build_model(const Config& config, const SegmentedLeg& leg) {
  HopperModel m;
  m.base_mass_kg = config.base.mass_kg;
  m.base_inertia_kg_m2 = config.base.inertia_kg_m2;
  m.carriage_mass_kg = config.actuator.carriage_mass_kg;
  m.contact = config.contact;
  m.gravity_m_s2 = config.sim.gravity_m_s2;
  m.travel_min_m = config.actuator.travel_min_m;
  m.travel_max_m = config.actuator.travel_max_m;
  m.stop_stiffness_n_m = config.actuator.stop_stiffness_n_m;
  m.stop_damping_n_s_m = config.actuator.stop_damping_n_s_m;
  m.hip_offset_m = config.actuator.hip_offset_m;
  m.spring_travel_cap_m = config.actuator.spring_travel_cap_m;

  const double k_leg_spring = config.actuator.spring_n_m;
  const double c_leg_spring = config.actuator.spring_damping_n_s_m;
  const double inf = std::numeric_limits<double>::infinity();

  if (leg.rigid) {
    // Whole chain is one lump on the pure leg spring.
    m.node_mass_kg = {leg.total_mass_kg};
    m.slot_stiffness_n_m = {k_leg_spring};
    m.slot_damping_n_s_m = {c_leg_spring};
    m.slot_rest_m = {config.actuator.seat_gap_m + leg.total_length_m};
    m.slot_material_share = {0.0};
    m.material_cap_m = {inf};
  } else {
    const int n = static_cast<int>(leg.segments.size());
    m.node_mass_kg.resize(n);
    m.slot_stiffness_n_m.resize(n);
    m.slot_damping_n_s_m.resize(n);
    m.slot_rest_m.resize(n);
    m.slot_material_share.assign(n, 1.0);
    m.material_cap_m.resize(n);
    for (int i = 0; i < n; ++i) {
      const SegmentSpec& seg = leg.segments[i];
      m.node_mass_kg[i] = seg.mass_kg;
      m.material_cap_m[i] = 0.5 * seg.length_m;
      if (i == 0) {
        m.slot_rest_m[0] = config.actuator.seat_gap_m + seg.length_m;
        if (config.actuator.carriage_mass_kg > 0.0) {
          // leg spring in series with the first segment spring
          const double ks[] = {k_leg_spring, seg.stiffness_n_m};
          m.slot_stiffness_n_m[0] = series_stiffness(ks);
          m.slot_damping_n_s_m[0] = c_leg_spring;
          m.slot_material_share[0] =
              m.slot_stiffness_n_m[0] / seg.stiffness_n_m;
        } else {
          m.slot_stiffness_n_m[0] = seg.stiffness_n_m;
          m.slot_damping_n_s_m[0] = seg.damping_n_s_m;
        }
      } else {
        m.slot_rest_m[i] = seg.length_m;
        m.slot_stiffness_n_m[i] = seg.stiffness_n_m;
        m.slot_damping_n_s_m[i] = seg.damping_n_s_m;
      }
    }
  }

  m.actuator_enabled = config.actuator.carriage_mass_kg > 0.0;
  if (!m.actuator_enabled) m.carriage_mass_kg = 0.0;

  m.total_mass_kg = m.base_mass_kg + m.carriage_mass_kg;
  for (double mk : m.node_mass_kg) m.total_mass_kg += mk;

  double rest_sum = 0.0;
  for (double r : m.slot_rest_m) rest_sum += r;
  const double travel_at_stand = m.actuator_enabled ? m.travel_min_m : 0.0;
  const double travel_extended = m.actuator_enabled ? m.travel_max_m : 0.0;
  m.standing_height_m = m.hip_offset_m + travel_at_stand + rest_sum;
  m.leg_length_m = m.hip_offset_m + travel_extended + rest_sum;
  return m;
}

HopperState initial_state(const HopperModel& model, double drop_height_m,
                          double tip_rad) {
  HopperState s;
  const int n = model.chain_size();
  s.delta.assign(n, 0.0);
  s.delta_dot.assign(n, 0.0);
  s.l_s = model.actuator_enabled ? model.travel_min_m : 0.0;
  s.phi.y = tip_rad;
  s.p = {0.0, 0.0,
         model.terrain.height(0.0, 0.0) + model.standing_height_m +
             drop_height_m};
  return s;
}

Vec3 leg_axis(const HopperState& state) { return leg_axis_frame(state).u; }

Vec3 foot_position(const HopperModel& model, const HopperState& state) {
  const AxialLayout lay = axial_layout(model, state);
  return state.p + leg_axis_frame(state).u * lay.s.back();
}

void step(const HopperModel& m, HopperState& s, ContactState& contact,
          IntegratorScratch& scratch, const ActuationInput& input,
          double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step: dt must be positive and finite");
  }
  const int n = m.chain_size();
  const LegAxis axis = leg_axis_frame(s);
  const Vec3 udot = axis_rate(axis, s);
  const double udot_sq = udot.dot(udot);
  const AxialLayout lay = axial_layout(m, s);
  const Vec3 gravity{0.0, 0.0, -m.gravity_m_s2};
  // Free-fall consistent seed keeps a quiescent chain quiescent in flight.
  const Vec3 base_accel_prev =
      scratch.initialized ? scratch.base_accel : gravity;
  const double g_axial = gravity.dot(axis.u);
  const double frame_axial = base_accel_prev.dot(axis.u);

  // ----- contact -----
  const Vec3 foot = s.p + axis.u * lay.s.back();
  const Vec3 foot_vel = s.v + udot * lay.s.back() + axis.u * lay.sdot.back();
  const Vec3 normal = m.terrain.normal();
  const double dist = normal.dot(foot);  // signed height above the surface
  Vec3 f_contact{0.0, 0.0, 0.0};
  double fn = 0.0;
  const double foot_mass = m.node_mass_kg.back();
  if (dist < 0.0) {
    const double pen = -dist;
    const double pen_rate = -normal.dot(foot_vel);
    const double f_el = m.contact.stiffness_n_m * pen;
    const double f_dmp = clamped_damping(m.contact.damping_n_s_m, pen_rate,
                                         foot_mass, dt);
    fn = std::max(0.0, f_el + f_dmp);
    if (fn > 0.0) {
      const Vec3 surface_pt = foot - normal * dist;
      if (!contact.anchored) {
        contact.anchored = true;
        contact.anchor = surface_pt;
      }
      Vec3 disp = foot - contact.anchor;
      disp -= normal * normal.dot(disp);
      Vec3 v_t = foot_vel - normal * normal.dot(foot_vel);
      const double c_t = m.contact.tangential_damping_n_s_m;
      const double vt_norm = v_t.norm();
      double damp_scale = c_t;
      if (vt_norm > 0.0) {
        damp_scale = std::min(c_t, foot_mass / dt);  // same clamp, vectorial
      }
      Vec3 f_t = disp * -m.contact.tangential_stiffness_n_m -
                 v_t * damp_scale;
      const double f_t_norm = f_t.norm();
      const double f_t_max = m.contact.friction_mu * fn;
      if (f_t_norm > f_t_max && f_t_norm > 0.0) {
        f_t = f_t * (f_t_max / f_t_norm);
        // drag the anchor so the spring demand relaxes onto the cone
        contact.anchor =
            surface_pt + f_t * (1.0 / m.contact.tangential_stiffness_n_m);
        contact.anchor -= normal * normal.dot(contact.anchor);
      }
      f_contact = normal * fn + f_t;
    }
  } else {
    contact.anchored = false;
  }
  contact.in_contact = fn > 0.0;
  contact.foot_position = foot;
  contact.foot_velocity = foot_vel;
  contact.force = f_contact;
  contact.fn = fn;
  const double contact_axial = f_contact.dot(axis.u);

  // ----- axial chain: per-node world-frame Newton along the axis -----
  // slot force magnitude, positive pulls the pair together (stretched)
  std::vector<double> f_slot(n);
  for (int i = 0; i < n; ++i) {
    const double reduced =
        std::min(m.node_mass_kg[i],
                 i == 0 ? (m.actuator_enabled ? m.carriage_mass_kg
                                              : m.node_mass_kg[0])
                        : m.node_mass_kg[i - 1]);
    f_slot[i] = m.slot_stiffness_n_m[i] * s.delta[i] +
                clamped_damping(m.slot_damping_n_s_m[i], s.delta_dot[i],
                                reduced, dt);
  }

  double sdd_carriage = 0.0;
  if (m.actuator_enabled) {
    double f = input.tau3_n;            // thrust pushes the carriage down-leg
    f += f_slot[0];                     // stretched slot 0 pulls it down-leg
    if (s.l_s < m.travel_min_m) {
      f += m.stop_stiffness_n_m * (m.travel_min_m - s.l_s) -
           clamped_damping(m.stop_damping_n_s_m, s.l_s_dot,
                           m.carriage_mass_kg, dt);
    } else if (s.l_s > m.travel_max_m) {
      f -= m.stop_stiffness_n_m * (s.l_s - m.travel_max_m) +
           clamped_damping(m.stop_damping_n_s_m, s.l_s_dot,
                           m.carriage_mass_kg, dt);
    }
    sdd_carriage = f / m.carriage_mass_kg + g_axial - frame_axial +
                   udot_sq * lay.s_carriage;
  }

  std::vector<double> sdd(n);
  for (int i = 0; i < n; ++i) {
    double f = -f_slot[i];                   // slot above pulls toward hip
    if (i + 1 < n) f += f_slot[i + 1];       // slot below pulls away
    if (i == n - 1) f += contact_axial;
    sdd[i] = f / m.node_mass_kg[i] + g_axial - frame_axial +
             udot_sq * lay.s[i];
  }

  // ----- leg swing about the hip -----
  double j_leg = 0.0;
  double moment = 0.0;  // first mass moment along the axis
  if (m.actuator_enabled) {
    j_leg += m.carriage_mass_kg * lay.s_carriage * lay.s_carriage;
    moment += m.carriage_mass_kg * lay.s_carriage;
  }
  for (int i = 0; i < n; ++i) {
    j_leg += m.node_mass_kg[i] * lay.s[i] * lay.s[i];
    moment += m.node_mass_kg[i] * lay.s[i];
  }
  const Vec3 frame_lat = base_accel_prev - gravity;  // net support accel
  const double s_foot = lay.s.back();
  const double q_x = input.tau1_n_m + moment * gravity.dot(axis.du_dthx) -
                     moment * frame_lat.dot(axis.du_dthx) +
                     s_foot * f_contact.dot(axis.du_dthx);
  const double q_y = input.tau2_n_m + moment * gravity.dot(axis.du_dthy) -
                     moment * frame_lat.dot(axis.du_dthy) +
                     s_foot * f_contact.dot(axis.du_dthy);
  const double thdd_x = q_x / j_leg;
  const double thdd_y = q_y / j_leg;

  // ----- base attitude: hip torque reaction only -----
  const double phidd_x = -input.tau1_n_m / m.base_inertia_kg_m2;
  const double phidd_y = -input.tau2_n_m / m.base_inertia_kg_m2;

  // ----- translation: the COM sees external forces only -----
  const double inv_mass = 1.0 / m.total_mass_kg;
  const Vec3 a_com = gravity + f_contact * inv_mass;
  if (!scratch.initialized) {
    // Seed the COM from the state once; free fall consistent base_accel so
    // a quiescent chain stays quiescent through ballistic flight.
    double axial_mass_rate = m.carriage_mass_kg * lay.sdot_carriage;
    for (int i = 0; i < n; ++i) {
      axial_mass_rate += m.node_mass_kg[i] * lay.sdot[i];
    }
    scratch.com_position = s.p + axis.u * (moment * inv_mass);
    scratch.com_velocity =
        s.v + (udot * moment + axis.u * axial_mass_rate) * inv_mass;
    scratch.initialized = true;
  }

  // ----- semi-implicit update: velocities, then positions -----
  const Vec3 v_com_new = scratch.com_velocity + a_com * dt;
  const Vec3 x_com_new = scratch.com_position + v_com_new * dt;

  if (m.actuator_enabled) s.l_s_dot += sdd_carriage * dt;
  double prev_sdd = sdd_carriage;
  for (int i = 0; i < n; ++i) {
    s.delta_dot[i] += (sdd[i] - prev_sdd) * dt;
    prev_sdd = sdd[i];
  }
  s.thetadot_x += thdd_x * dt;
  s.thetadot_y += thdd_y * dt;
  s.phidot.x += phidd_x * dt;
  s.phidot.y += phidd_y * dt;

  s.phi.x += s.phidot.x * dt;
  s.phi.y += s.phidot.y * dt;
  s.theta_x += s.thetadot_x * dt;
  s.theta_y += s.thetadot_y * dt;
  if (m.actuator_enabled) s.l_s += s.l_s_dot * dt;
  for (int i = 0; i < n; ++i) s.delta[i] += s.delta_dot[i] * dt;
  s.t += dt;

  // slave the base to the COM at the new configuration
  const LegAxis axis_new = leg_axis_frame(s);
  const AxialLayout lay_new = axial_layout(m, s);
  double moment_new = m.carriage_mass_kg * lay_new.s_carriage;
  for (int i = 0; i < n; ++i) {
    moment_new += m.node_mass_kg[i] * lay_new.s[i];
  }
  const Vec3 p_new = x_com_new - axis_new.u * (moment_new * inv_mass);
  const Vec3 v_base_old = s.v;
  s.v = (p_new - s.p) * (1.0 / dt);
  s.p = p_new;
  scratch.com_position = x_com_new;
  scratch.com_velocity = v_com_new;
  scratch.base_accel = (s.v - v_base_old) * (1.0 / dt);

  // ----- fault checks -----
  check_finite(s);
  for (int i = 0; i < n; ++i) {
    const double material = s.delta[i] * m.slot_material_share[i];
    if (std::abs(material) > m.material_cap_m[i]) {
      throw NumericalInstability("segment deflection beyond cap");
    }
  }
  if (m.actuator_enabled) {
    const double spring_share =
        s.delta[0] * (1.0 - m.slot_material_share[0]);
    if (std::abs(spring_share) > m.spring_travel_cap_m) {
      throw NumericalInstability("leg spring deflection beyond cap");
    }
    if (s.l_s < m.travel_min_m - 0.5 || s.l_s > m.travel_max_m + 0.5) {
      throw NumericalInstability("actuator travel blowup");
    }
  }
}

double mechanical_energy(const HopperModel& m, const HopperState& s) {
  const int n = m.chain_size();
  const LegAxis axis = leg_axis_frame(s);
  const Vec3 udot = axis_rate(axis, s);
  const AxialLayout lay = axial_layout(m, s);

  double e = 0.5 * m.base_mass_kg * s.v.dot(s.v) +
             0.5 * m.base_inertia_kg_m2 *
                 (s.phidot.x * s.phidot.x + s.phidot.y * s.phidot.y) +
             m.base_mass_kg * m.gravity_m_s2 * s.p.z;
  if (m.actuator_enabled) {
    const Vec3 vel =
        s.v + udot * lay.s_carriage + axis.u * lay.sdot_carriage;
    const Vec3 pos = s.p + axis.u * lay.s_carriage;
    e += 0.5 * m.carriage_mass_kg * vel.dot(vel) +
         m.carriage_mass_kg * m.gravity_m_s2 * pos.z;
  }
  for (int i = 0; i < n; ++i) {
    const Vec3 vel = s.v + udot * lay.s[i] + axis.u * lay.sdot[i];
    const Vec3 pos = s.p + axis.u * lay.s[i];
    e += 0.5 * m.node_mass_kg[i] * vel.dot(vel) +
         m.node_mass_kg[i] * m.gravity_m_s2 * pos.z;
    e += 0.5 * m.slot_stiffness_n_m[i] * s.delta[i] * s.delta[i];
  }
  return e;
}

Vec3 linear_momentum(const HopperModel& m, const HopperState& s) {
  const int n = m.chain_size();
  const LegAxis axis = leg_axis_frame(s);
  const Vec3 udot = axis_rate(axis, s);
  const AxialLayout lay = axial_layout(m, s);
  Vec3 p = s.v * m.base_mass_kg;
  if (m.actuator_enabled) {
    p += (s.v + udot * lay.s_carriage + axis.u * lay.sdot_carriage) *
         m.carriage_mass_kg;
  }
  for (int i = 0; i < n; ++i) {
    p += (s.v + udot * lay.s[i] + axis.u * lay.sdot[i]) * m.node_mass_kg[i];
  }
  return p;
}

PhaseEvents detect_phase_events(const SimTrace& trace, double min_stance_s,
                                double min_flight_s) {
  if (trace.size() == 0) {
    throw EmptyTrace("detect_phase_events: empty trace");
  }
  PhaseEvents ev;
  const std::size_t n = trace.size();
  // Debounced phase: a flip must persist for the minimum duration to count.
  int phase = trace.phase[0];
  std::size_t i = 1;
  while (i < n) {
    if (trace.phase[i] != phase) {
      const double need = trace.phase[i] == 1 ? min_stance_s : min_flight_s;
      const double t0 = trace.t[i];
      std::size_t j = i;
      while (j + 1 < n && trace.phase[j + 1] == trace.phase[i] &&
             trace.t[j + 1] - t0 < need) {
        ++j;
      }
      const bool held =
          (j + 1 < n && trace.phase[j + 1] == trace.phase[i]) ||
          (j + 1 == n && trace.t[j] - t0 >= need) ||
          need <= 0.0;
      if (held) {
        if (trace.phase[i] == 1) {
          ev.touchdowns.push_back(i);
        } else {
          ev.liftoffs.push_back(i);
        }
        phase = trace.phase[i];
        i = i + 1;
      } else {
        i = j + 1;  // transient flip, skip past it
      }
    } else {
      ++i;
    }
  }
  // Apexes: vertical rate sign change while airborne (debounced phase not
  // needed; a touching-down hopper has negative rate anyway).
  for (std::size_t k = 1; k < n; ++k) {
    if (trace.v_z[k - 1] > 0.0 && trace.v_z[k] <= 0.0 &&
        trace.phase[k] == 0) {
      ev.apexes.push_back(k);
    }
  }
  return ev;
}

}  // namespace hopsim
