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

#include "hopsim/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace hopsim {

using nlohmann::json;

namespace {

json bounds_to_json(const AshbyBounds& b) {
  return {{"density_min_kg_m3", b.density_min_kg_m3},
          {"density_max_kg_m3", b.density_max_kg_m3},
          {"modulus_min_pa", b.modulus_min_pa},
          {"modulus_max_pa", b.modulus_max_pa}};
}

AshbyBounds bounds_from_json(const json& j) {
  AshbyBounds b;
  b.density_min_kg_m3 = j.at("density_min_kg_m3").get<double>();
  b.density_max_kg_m3 = j.at("density_max_kg_m3").get<double>();
  b.modulus_min_pa = j.at("modulus_min_pa").get<double>();
  b.modulus_max_pa = j.at("modulus_max_pa").get<double>();
  return b;
}

std::string class_name(AshbyClass cls) {
  return cls == AshbyClass::MetalCeramic ? "metal_ceramic"
                                         : "polymer_natural";
}

AshbyClass class_from_name(const std::string& name) {
  if (name == "metal_ceramic") return AshbyClass::MetalCeramic;
  if (name == "polymer_natural") return AshbyClass::PolymerNatural;
  throw std::invalid_argument("config: unknown ashby_class '" + name + "'");
}

json config_json(const Config& c) {
  json j;
  j["geometry"] = {{"leg_length_m", c.geometry.leg_length_m},
                   {"segment_radius_m", c.geometry.segment_radius_m},
                   {"segment_count", c.geometry.segment_count},
                   {"damping_ratio", c.geometry.damping_ratio}};
  j["base"] = {{"mass_kg", c.base.mass_kg},
               {"inertia_kg_m2", c.base.inertia_kg_m2}};
  j["actuator"] = {{"carriage_mass_kg", c.actuator.carriage_mass_kg},
                   {"spring_n_m", c.actuator.spring_n_m},
                   {"spring_damping_n_s_m", c.actuator.spring_damping_n_s_m},
                   {"spring_travel_cap_m", c.actuator.spring_travel_cap_m},
                   {"travel_min_m", c.actuator.travel_min_m},
                   {"travel_max_m", c.actuator.travel_max_m},
                   {"stop_stiffness_n_m", c.actuator.stop_stiffness_n_m},
                   {"stop_damping_n_s_m", c.actuator.stop_damping_n_s_m},
                   {"hip_offset_m", c.actuator.hip_offset_m},
                   {"seat_gap_m", c.actuator.seat_gap_m}};
  j["contact"] = {
      {"stiffness_n_m", c.contact.stiffness_n_m},
      {"damping_n_s_m", c.contact.damping_n_s_m},
      {"friction_mu", c.contact.friction_mu},
      {"tangential_stiffness_n_m", c.contact.tangential_stiffness_n_m},
      {"tangential_damping_n_s_m", c.contact.tangential_damping_n_s_m}};
  j["controller"] = {
      {"stance_period_s", c.controller.stance_period_s},
      {"stance_period_ema_alpha", c.controller.stance_period_ema_alpha},
      {"stance_period_warmup_hops", c.controller.stance_period_warmup_hops},
      {"k1_s", c.controller.k1_s},
      {"k2", c.controller.k2},
      {"k3", c.controller.k3},
      {"max_speed_m_s", c.controller.max_speed_m_s},
      {"flight_kp_n_m_rad", c.controller.flight_kp_n_m_rad},
      {"flight_kd_n_m_s_rad", c.controller.flight_kd_n_m_s_rad},
      {"stance_kp_n_m_rad", c.controller.stance_kp_n_m_rad},
      {"stance_kd_n_m_s_rad", c.controller.stance_kd_n_m_s_rad},
      {"hop_gain_n_m", c.controller.hop_gain_n_m},
      {"hop_height_des_m", c.controller.hop_height_des_m},
      {"thrust_initial_n", c.controller.thrust_initial_n},
      {"tau_hip_max_n_m", c.controller.tau_hip_max_n_m},
      {"tau_thrust_max_n", c.controller.tau_thrust_max_n},
      {"control_tick_s", c.controller.control_tick_s},
      {"reach_fraction", c.controller.reach_fraction},
      {"min_stance_s", c.controller.min_stance_s},
      {"min_flight_s", c.controller.min_flight_s}};
  j["sim"] = {{"gravity_m_s2", c.sim.gravity_m_s2},
              {"duration_s", c.sim.duration_s},
              {"cutoff_s", c.sim.cutoff_s},
              {"dt_s", c.sim.dt_s},
              {"auto_dt_fraction", c.sim.auto_dt_fraction},
              {"sample_period_s", c.sim.sample_period_s},
              {"drop_height_m", c.sim.drop_height_m},
              {"apex_blowup_factor", c.sim.apex_blowup_factor}};
  j["stability"] = {
      {"ladder_top_s", c.stability.ladder_top_s},
      {"ladder_bottom_s", c.stability.ladder_bottom_s},
      {"ladder_factor", c.stability.ladder_factor},
      {"bisect_rel_tol", c.stability.bisect_rel_tol},
      {"trial_duration_s", c.stability.trial_duration_s},
      {"grid_rows", c.stability.grid_rows},
      {"grid_cols", c.stability.grid_cols},
      {"grid_density_min_kg_m3", c.stability.grid_density_min_kg_m3},
      {"grid_density_max_kg_m3", c.stability.grid_density_max_kg_m3},
      {"grid_modulus_min_pa", c.stability.grid_modulus_min_pa},
      {"grid_modulus_max_pa", c.stability.grid_modulus_max_pa}};
  j["behavior"] = {{"forward_speed_m_s", c.behavior.forward_speed_m_s},
                   {"ramp_grade", c.behavior.ramp_grade},
                   {"circle_radius_m", c.behavior.circle_radius_m},
                   {"circle_speed_m_s", c.behavior.circle_speed_m_s}};
  j["sweep"] = {
      {"density_values_kg_m3", c.sweep.density_values_kg_m3},
      {"density_sweep_modulus_pa", c.sweep.density_sweep_modulus_pa},
      {"modulus_values_pa", c.sweep.modulus_values_pa},
      {"modulus_sweep_density_kg_m3", c.sweep.modulus_sweep_density_kg_m3},
      {"gradient_modulus_pa", c.sweep.gradient_modulus_pa},
      {"gradient_densities_kg_m3", c.sweep.gradient_densities_kg_m3}};
  j["harness"] = {{"workers", c.harness.workers}};
  j["ashby_bounds"] = {
      {"metal_ceramic", bounds_to_json(c.catalog.bounds(AshbyClass::MetalCeramic))},
      {"polymer_natural",
       bounds_to_json(c.catalog.bounds(AshbyClass::PolymerNatural))}};
  json mats = json::array();
  for (const MaterialSpec& m : c.catalog.entries()) {
    json jm = {{"name", m.name},
               {"density_kg_m3", m.density_kg_m3},
               {"ashby_class", class_name(m.ashby)},
               {"rigid", m.rigid}};
    if (!m.rigid) jm["modulus_pa"] = m.modulus_pa;
    mats.push_back(jm);
  }
  j["materials"] = mats;
  return j;
}

Config config_from_json(const json& j) {
  Config c;
  const json& g = j.at("geometry");
  c.geometry.leg_length_m = g.at("leg_length_m").get<double>();
  c.geometry.segment_radius_m = g.at("segment_radius_m").get<double>();
  c.geometry.segment_count = g.at("segment_count").get<int>();
  c.geometry.damping_ratio = g.at("damping_ratio").get<double>();

  const json& b = j.at("base");
  c.base.mass_kg = b.at("mass_kg").get<double>();
  c.base.inertia_kg_m2 = b.at("inertia_kg_m2").get<double>();

  const json& a = j.at("actuator");
  c.actuator.carriage_mass_kg = a.at("carriage_mass_kg").get<double>();
  c.actuator.spring_n_m = a.at("spring_n_m").get<double>();
  c.actuator.spring_damping_n_s_m = a.at("spring_damping_n_s_m").get<double>();
  c.actuator.spring_travel_cap_m = a.at("spring_travel_cap_m").get<double>();
  c.actuator.travel_min_m = a.at("travel_min_m").get<double>();
  c.actuator.travel_max_m = a.at("travel_max_m").get<double>();
  c.actuator.stop_stiffness_n_m = a.at("stop_stiffness_n_m").get<double>();
  c.actuator.stop_damping_n_s_m = a.at("stop_damping_n_s_m").get<double>();
  c.actuator.hip_offset_m = a.at("hip_offset_m").get<double>();
  c.actuator.seat_gap_m = a.at("seat_gap_m").get<double>();

  const json& ct = j.at("contact");
  c.contact.stiffness_n_m = ct.at("stiffness_n_m").get<double>();
  c.contact.damping_n_s_m = ct.at("damping_n_s_m").get<double>();
  c.contact.friction_mu = ct.at("friction_mu").get<double>();
  c.contact.tangential_stiffness_n_m =
      ct.at("tangential_stiffness_n_m").get<double>();
  c.contact.tangential_damping_n_s_m =
      ct.at("tangential_damping_n_s_m").get<double>();

  const json& cc = j.at("controller");
  c.controller.stance_period_s = cc.at("stance_period_s").get<double>();
  c.controller.stance_period_ema_alpha =
      cc.at("stance_period_ema_alpha").get<double>();
  c.controller.stance_period_warmup_hops =
      cc.at("stance_period_warmup_hops").get<int>();
  c.controller.k1_s = cc.at("k1_s").get<double>();
  c.controller.k2 = cc.at("k2").get<double>();
  c.controller.k3 = cc.at("k3").get<double>();
  c.controller.max_speed_m_s = cc.at("max_speed_m_s").get<double>();
  c.controller.flight_kp_n_m_rad = cc.at("flight_kp_n_m_rad").get<double>();
  c.controller.flight_kd_n_m_s_rad =
      cc.at("flight_kd_n_m_s_rad").get<double>();
  c.controller.stance_kp_n_m_rad = cc.at("stance_kp_n_m_rad").get<double>();
  c.controller.stance_kd_n_m_s_rad =
      cc.at("stance_kd_n_m_s_rad").get<double>();
  c.controller.hop_gain_n_m = cc.at("hop_gain_n_m").get<double>();
  c.controller.hop_height_des_m = cc.at("hop_height_des_m").get<double>();
  c.controller.thrust_initial_n = cc.at("thrust_initial_n").get<double>();
  c.controller.tau_hip_max_n_m = cc.at("tau_hip_max_n_m").get<double>();
  c.controller.tau_thrust_max_n = cc.at("tau_thrust_max_n").get<double>();
  c.controller.control_tick_s = cc.at("control_tick_s").get<double>();
  c.controller.reach_fraction = cc.at("reach_fraction").get<double>();
  c.controller.min_stance_s = cc.at("min_stance_s").get<double>();
  c.controller.min_flight_s = cc.at("min_flight_s").get<double>();

  const json& s = j.at("sim");
  c.sim.gravity_m_s2 = s.at("gravity_m_s2").get<double>();
  c.sim.duration_s = s.at("duration_s").get<double>();
  c.sim.cutoff_s = s.at("cutoff_s").get<double>();
  c.sim.dt_s = s.at("dt_s").get<double>();
  c.sim.auto_dt_fraction = s.at("auto_dt_fraction").get<double>();
  c.sim.sample_period_s = s.at("sample_period_s").get<double>();
  c.sim.drop_height_m = s.at("drop_height_m").get<double>();
  c.sim.apex_blowup_factor = s.at("apex_blowup_factor").get<double>();

  const json& st = j.at("stability");
  c.stability.ladder_top_s = st.at("ladder_top_s").get<double>();
  c.stability.ladder_bottom_s = st.at("ladder_bottom_s").get<double>();
  c.stability.ladder_factor = st.at("ladder_factor").get<double>();
  c.stability.bisect_rel_tol = st.at("bisect_rel_tol").get<double>();
  c.stability.trial_duration_s = st.at("trial_duration_s").get<double>();
  c.stability.grid_rows = st.at("grid_rows").get<int>();
  c.stability.grid_cols = st.at("grid_cols").get<int>();
  c.stability.grid_density_min_kg_m3 =
      st.at("grid_density_min_kg_m3").get<double>();
  c.stability.grid_density_max_kg_m3 =
      st.at("grid_density_max_kg_m3").get<double>();
  c.stability.grid_modulus_min_pa = st.at("grid_modulus_min_pa").get<double>();
  c.stability.grid_modulus_max_pa = st.at("grid_modulus_max_pa").get<double>();

  const json& bh = j.at("behavior");
  c.behavior.forward_speed_m_s = bh.at("forward_speed_m_s").get<double>();
  c.behavior.ramp_grade = bh.at("ramp_grade").get<double>();
  c.behavior.circle_radius_m = bh.at("circle_radius_m").get<double>();
  c.behavior.circle_speed_m_s = bh.at("circle_speed_m_s").get<double>();

  const json& sw = j.at("sweep");
  c.sweep.density_values_kg_m3 =
      sw.at("density_values_kg_m3").get<std::vector<double>>();
  c.sweep.density_sweep_modulus_pa =
      sw.at("density_sweep_modulus_pa").get<double>();
  c.sweep.modulus_values_pa =
      sw.at("modulus_values_pa").get<std::vector<double>>();
  c.sweep.modulus_sweep_density_kg_m3 =
      sw.at("modulus_sweep_density_kg_m3").get<double>();
  c.sweep.gradient_modulus_pa = sw.at("gradient_modulus_pa").get<double>();
  c.sweep.gradient_densities_kg_m3 =
      sw.at("gradient_densities_kg_m3").get<std::vector<double>>();

  const json& h = j.at("harness");
  c.harness.workers = h.at("workers").get<int>();

  const json& ab = j.at("ashby_bounds");
  c.catalog = MaterialCatalog(bounds_from_json(ab.at("metal_ceramic")),
                              bounds_from_json(ab.at("polymer_natural")));
  for (const json& jm : j.at("materials")) {
    MaterialSpec m;
    m.name = jm.at("name").get<std::string>();
    m.density_kg_m3 = jm.at("density_kg_m3").get<double>();
    m.rigid = jm.value("rigid", false);
    m.ashby = class_from_name(
        jm.value("ashby_class", std::string("metal_ceramic")));
    if (!m.rigid) m.modulus_pa = jm.at("modulus_pa").get<double>();
    c.catalog.add(m);
  }
  return c;
}

// Rejects keys that do not exist in the reference document; catches typos
// that merge_patch would otherwise silently accept.
void check_known_keys(const json& reference, const json& candidate,
                      const std::string& path) {
  if (!candidate.is_object() || !reference.is_object()) return;
  for (const auto& [key, value] : candidate.items()) {
    if (!reference.contains(key)) {
      throw std::invalid_argument("config: unknown key '" + path + key + "'");
    }
    check_known_keys(reference.at(key), value, path + key + ".");
  }
}

void basic_validate(const Config& c) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("config: ") + what +
                                  " must be > 0");
    }
  };
  positive(c.geometry.leg_length_m, "geometry.leg_length_m");
  positive(c.geometry.segment_radius_m, "geometry.segment_radius_m");
  if (c.geometry.segment_count < 1) {
    throw std::invalid_argument("config: geometry.segment_count must be >= 1");
  }
  positive(c.base.mass_kg, "base.mass_kg");
  positive(c.base.inertia_kg_m2, "base.inertia_kg_m2");
  positive(c.actuator.carriage_mass_kg, "actuator.carriage_mass_kg");
  positive(c.actuator.spring_n_m, "actuator.spring_n_m");
  positive(c.contact.stiffness_n_m, "contact.stiffness_n_m");
  positive(c.sim.duration_s, "sim.duration_s");
  positive(c.sim.sample_period_s, "sim.sample_period_s");
  if (c.sim.cutoff_s < 0.0 || c.sim.cutoff_s >= c.sim.duration_s) {
    throw std::invalid_argument(
        "config: sim.cutoff_s must be in [0, duration)");
  }
  if (c.sim.dt_s < 0.0) {
    throw std::invalid_argument("config: sim.dt_s must be >= 0 (0 = auto)");
  }
  if (!(c.stability.ladder_top_s > c.stability.ladder_bottom_s)) {
    throw std::invalid_argument("config: stability ladder top must exceed "
                                "bottom");
  }
  if (!(c.stability.ladder_factor > 1.0)) {
    throw std::invalid_argument("config: stability.ladder_factor must be > 1");
  }
  if (c.actuator.travel_max_m <= c.actuator.travel_min_m) {
    throw std::invalid_argument("config: actuator travel range is empty");
  }
  if (c.harness.workers < 1) {
    throw std::invalid_argument("config: harness.workers must be >= 1");
  }
}

}  // namespace

Config default_config() {
  Config c;
  c.catalog.add({"md", 1000.0, 0.0, AshbyClass::PolymerNatural, true});
  c.catalog.add({"pvc", 1390.0, 3.0e9, AshbyClass::PolymerNatural, false});
  c.catalog.add({"al", 2700.0, 69.0e9, AshbyClass::MetalCeramic, false});
  c.catalog.add({"ti", 4430.0, 114.0e9, AshbyClass::MetalCeramic, false});
  c.catalog.add({"ss", 8000.0, 200.0e9, AshbyClass::MetalCeramic, false});
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + path + "'");
  }
  json file;
  try {
    file = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: parse error in '" + path +
                                "': " + e.what());
  }
  json doc = config_json(default_config());
  check_known_keys(doc, file, "");
  doc.merge_patch(file);
  Config c = config_from_json(doc);
  basic_validate(c);
  return c;
}

std::string config_to_json(const Config& config) {
  return config_json(config).dump(2) + "\n";
}

std::string config_fingerprint(const Config& config) {
  const std::string canon = config_json(config).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ull;  // FNV prime
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace hopsim
