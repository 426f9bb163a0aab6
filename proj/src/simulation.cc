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

#include "hopsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hopsim/controller.hpp"

namespace hopsim {

SegmentedLeg mono_leg(const Config& config, const MaterialSpec& material) {
  const std::vector<MaterialSpec> mats(
      static_cast<std::size_t>(config.geometry.segment_count), material);
  return build_leg(mats, config.geometry.segment_radius_m,
                   config.geometry.leg_length_m,
                   config.geometry.damping_ratio);
}

SegmentedLeg gradient_leg(const Config& config,
                          const std::vector<MaterialSpec>& materials) {
  return build_leg(materials, config.geometry.segment_radius_m,
                   config.geometry.leg_length_m,
                   config.geometry.damping_ratio);
}

DtResolution resolve_dt(double requested_dt_s, double sample_period_s) {
  if (!(requested_dt_s > 0.0) || !(sample_period_s > 0.0)) {
    throw std::invalid_argument("resolve_dt: periods must be positive");
  }
  DtResolution r;
  if (requested_dt_s >= sample_period_s) {
    r.steps_per_sample = 1;
  } else {
    r.steps_per_sample =
        static_cast<int>(std::ceil(sample_period_s / requested_dt_s - 1e-9));
  }
  r.dt_s = sample_period_s / r.steps_per_sample;
  return r;
}

namespace {

void record_sample(SimTrace& tr, const HopperState& s,
                   const ActuationInput& u, const ContactState& c) {
  tr.t.push_back(s.t);
  tr.p_x.push_back(s.p.x);
  tr.p_y.push_back(s.p.y);
  tr.p_z.push_back(s.p.z);
  tr.phi_x.push_back(s.phi.x);
  tr.phi_y.push_back(s.phi.y);
  tr.phi_z.push_back(s.phi.z);
  tr.theta_x.push_back(s.theta_x);
  tr.theta_y.push_back(s.theta_y);
  tr.l_s.push_back(s.l_s);
  tr.v_x.push_back(s.v.x);
  tr.v_y.push_back(s.v.y);
  tr.v_z.push_back(s.v.z);
  tr.phidot_x.push_back(s.phidot.x);
  tr.phidot_y.push_back(s.phidot.y);
  tr.phidot_z.push_back(s.phidot.z);
  tr.thetadot_x.push_back(s.thetadot_x);
  tr.thetadot_y.push_back(s.thetadot_y);
  tr.l_s_dot.push_back(s.l_s_dot);
  tr.tau1.push_back(u.tau1_n_m);
  tr.tau2.push_back(u.tau2_n_m);
  tr.tau3.push_back(u.tau3_n);
  tr.f_z.push_back(c.force.z);
  tr.phase.push_back(c.fn > 0.0 ? 1 : 0);
}

}  // namespace

RunResult run_simulation(const Config& config, const SegmentedLeg& leg,
                         const BehaviorSpec& behavior, double dt_s) {
  if (!(dt_s > 0.0) || !std::isfinite(dt_s)) {
    throw std::invalid_argument("run_simulation: dt must be positive");
  }
  RunResult result;
  HopperModel model = build_model(config, leg);
  model.terrain = behavior_terrain(behavior);

  HopperState s = initial_state(model, config.sim.drop_height_m,
                                config.sim.initial_tip_rad);
  Controller controller(config.controller, behavior, model.terrain,
                        model.leg_length_m, model.standing_height_m);
  ContactState contact;
  IntegratorScratch scratch;

  const long long steps =
      std::llround(config.sim.duration_s / dt_s);
  const int stride = std::max(
      1, static_cast<int>(std::llround(config.sim.sample_period_s / dt_s)));

  SimTrace& tr = result.trace;
  tr.dt_s = dt_s;
  tr.sample_period_s = dt_s * stride;
  tr.standing_height_m = model.standing_height_m;
  tr.terrain_grade = model.terrain.grade;
  tr.fingerprint = config_fingerprint(config);
  const std::size_t expected =
      static_cast<std::size_t>(steps / stride) + 1;
  tr.t.reserve(expected);

  record_sample(tr, s, ActuationInput{}, contact);

  const double apex_limit =
      config.sim.apex_blowup_factor * config.controller.hop_height_des_m;
  double max_hop = 0.0;
  for (long long i = 0; i < steps; ++i) {
    ActuationInput u;
    try {
      u = controller.update(s, contact);
      step(model, s, contact, scratch, u, dt_s);
    } catch (const Unreachable& err) {
      // the attitude has left the envelope where a foot target exists
      result.unstable = true;
      result.fault = err.what();
      break;
    } catch (const NumericalInstability& err) {
      result.unstable = true;
      result.fault = err.what();
      break;
    }
    const double hop = s.p.z - model.terrain.height(s.p.x, s.p.y) -
                       model.standing_height_m;
    max_hop = std::max(max_hop, hop);
    if (hop > apex_limit) {
      result.unstable = true;
      result.fault = "apex runaway";
      break;
    }
    if ((i + 1) % stride == 0) record_sample(tr, s, u, contact);
  }
  result.max_hop_height_m = max_hop;
  result.final_state = s;
  return result;
}

// --------------------------------- trace io --------------------------------

namespace {

const char* const kTraceColumns =
    "t_s,p_x_m,p_y_m,p_z_m,phi_x_rad,phi_y_rad,phi_z_rad,theta_x_rad,"
    "theta_y_rad,l_s_m,v_x_m_s,v_y_m_s,v_z_m_s,phidot_x_rad_s,"
    "phidot_y_rad_s,phidot_z_rad_s,thetadot_x_rad_s,thetadot_y_rad_s,"
    "l_s_dot_m_s,tau1_n_m,tau2_n_m,tau3_n,f_z_n,phase";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(const std::string& path, const SimTrace& tr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << "# fingerprint=" << tr.fingerprint
      << " dt_s=" << format_double(tr.dt_s)
      << " sample_period_s=" << format_double(tr.sample_period_s)
      << " standing_height_m=" << format_double(tr.standing_height_m)
      << " terrain_grade=" << format_double(tr.terrain_grade) << "\n";
  out << kTraceColumns << "\n";
  const std::size_t n = tr.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << format_double(tr.t[i]) << ',' << format_double(tr.p_x[i]) << ','
        << format_double(tr.p_y[i]) << ',' << format_double(tr.p_z[i]) << ','
        << format_double(tr.phi_x[i]) << ',' << format_double(tr.phi_y[i])
        << ',' << format_double(tr.phi_z[i]) << ','
        << format_double(tr.theta_x[i]) << ','
        << format_double(tr.theta_y[i]) << ',' << format_double(tr.l_s[i])
        << ',' << format_double(tr.v_x[i]) << ',' << format_double(tr.v_y[i])
        << ',' << format_double(tr.v_z[i]) << ','
        << format_double(tr.phidot_x[i]) << ','
        << format_double(tr.phidot_y[i]) << ','
        << format_double(tr.phidot_z[i]) << ','
        << format_double(tr.thetadot_x[i]) << ','
        << format_double(tr.thetadot_y[i]) << ','
        << format_double(tr.l_s_dot[i]) << ',' << format_double(tr.tau1[i])
        << ',' << format_double(tr.tau2[i]) << ','
        << format_double(tr.tau3[i]) << ',' << format_double(tr.f_z[i])
        << ',' << tr.phase[i] << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

SimTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  SimTrace tr;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# fingerprint=", 0) != 0) {
    throw std::runtime_error("trace header missing: " + path);
  }
  {
    std::istringstream hs(line.substr(2));
    std::string kv;
    while (hs >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      if (key == "fingerprint") tr.fingerprint = val;
      if (key == "dt_s") tr.dt_s = std::stod(val);
      if (key == "sample_period_s") tr.sample_period_s = std::stod(val);
      if (key == "standing_height_m") tr.standing_height_m = std::stod(val);
      if (key == "terrain_grade") tr.terrain_grade = std::stod(val);
    }
  }
  if (!std::getline(in, line) || line != kTraceColumns) {
    throw std::runtime_error("trace columns missing: " + path);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double v[23];
    for (double& slot : v) {
      if (!std::getline(row, cell, ',')) {
        throw std::runtime_error("short trace row: " + path);
      }
      slot = std::stod(cell);
    }
    if (!std::getline(row, cell, ',')) {
      throw std::runtime_error("short trace row: " + path);
    }
    tr.t.push_back(v[0]);
    tr.p_x.push_back(v[1]);
    tr.p_y.push_back(v[2]);
    tr.p_z.push_back(v[3]);
    tr.phi_x.push_back(v[4]);
    tr.phi_y.push_back(v[5]);
    tr.phi_z.push_back(v[6]);
    tr.theta_x.push_back(v[7]);
    tr.theta_y.push_back(v[8]);
    tr.l_s.push_back(v[9]);
    tr.v_x.push_back(v[10]);
    tr.v_y.push_back(v[11]);
    tr.v_z.push_back(v[12]);
    tr.phidot_x.push_back(v[13]);
    tr.phidot_y.push_back(v[14]);
    tr.phidot_z.push_back(v[15]);
    tr.thetadot_x.push_back(v[16]);
    tr.thetadot_y.push_back(v[17]);
    tr.l_s_dot.push_back(v[18]);
    tr.tau1.push_back(v[19]);
    tr.tau2.push_back(v[20]);
    tr.tau3.push_back(v[21]);
    tr.f_z.push_back(v[22]);
    tr.phase.push_back(std::stoi(cell));
  }
  return tr;
}

}  // namespace hopsim
