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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hopsim/dynamics.hpp"

using namespace hopsim;

namespace {

// One unit-parameter chain segment: the density below gives exactly 1 kg of
// segment mass at r = 0.02 m, L = 1 m, and the modulus gives exactly
// k = 100 N/m, so the analytic angular frequency is exactly 10 rad/s.
constexpr double kUnitMassDensity = 795.7747154594766;
constexpr double kHundredNewtonModulus = 2.6525823848649222e8;

Config oscillator_config() {
  Config c = default_config();
  c.geometry.segment_count = 1;
  c.geometry.leg_length_m = 1.0;
  c.geometry.segment_radius_m = 0.02;
  c.geometry.damping_ratio = 0.0;
  c.actuator.carriage_mass_kg = 0.0;  // pins the actuator, pure chain rig
  c.base.mass_kg = 1.0e9;             // hip effectively inertial
  c.sim.gravity_m_s2 = 0.0;
  return c;
}

HopperModel oscillator_model() {
  const Config c = oscillator_config();
  const MaterialSpec mat{"osc", kUnitMassDensity, kHundredNewtonModulus,
                         AshbyClass::PolymerNatural, false};
  const SegmentedLeg leg =
      build_leg({mat}, c.geometry.segment_radius_m, c.geometry.leg_length_m,
                c.geometry.damping_ratio);
  return build_model(c, leg);
}

HopperModel default_aluminum_model(Config* out_config = nullptr) {
  const Config c = default_config();
  const MaterialSpec mat{"al", 2700.0, 69.0e9, AshbyClass::MetalCeramic,
                         false};
  const SegmentedLeg leg = build_leg(
      {mat, mat, mat}, c.geometry.segment_radius_m, c.geometry.leg_length_m,
      c.geometry.damping_ratio);
  if (out_config) *out_config = c;
  return build_model(c, leg);
}

}  // namespace

TEST_CASE("single-segment chain oscillates at the analytic period") {
  HopperModel model = oscillator_model();
  REQUIRE(model.chain_size() == 1);
  CHECK(model.node_mass_kg[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.slot_stiffness_n_m[0] == doctest::Approx(100.0).epsilon(1e-12));
  CHECK_FALSE(model.actuator_enabled);

  HopperState s = initial_state(model, 0.0);
  s.p.z = 5.0;  // keep the foot clear of the ground
  s.delta[0] = 0.01;
  ContactState contact;
  IntegratorScratch scratch;

  // 10 analytic periods of 2*pi/10 s, measured between zero crossings of
  // the deflection (crossing 1 to crossing 21 spans exactly 10 periods).
  const double dt = 1.0e-5;
  const double expected_span = 6.283185307179586;
  std::vector<double> crossings;
  double prev_delta = s.delta[0];
  double prev_t = s.t;
  while (s.t < 8.0 && crossings.size() < 21) {
    step(model, s, contact, scratch, ActuationInput{}, dt);
    if ((prev_delta > 0.0) != (s.delta[0] > 0.0)) {
      const double frac = prev_delta / (prev_delta - s.delta[0]);
      crossings.push_back(prev_t + frac * (s.t - prev_t));
    }
    prev_delta = s.delta[0];
    prev_t = s.t;
  }
  REQUIRE(crossings.size() == 21);
  const double span = crossings[20] - crossings[0];
  CHECK(span == doctest::Approx(expected_span).epsilon(0.01));
  CHECK_FALSE(contact.in_contact);
}

TEST_CASE("chain integration is stable up to 2*sqrt(m/k) and not beyond") {
  // m = 1 kg, k = 100 N/m puts the analytic step bound at 0.2 s.
  SUBCASE("just below the bound: bounded for thousands of steps") {
    HopperModel model = oscillator_model();
    HopperState s = initial_state(model, 0.0);
    s.p.z = 5.0;
    s.delta[0] = 0.01;
    ContactState contact;
    IntegratorScratch scratch;
    for (int i = 0; i < 5000; ++i) {
      CHECK_NOTHROW(
          step(model, s, contact, scratch, ActuationInput{}, 0.19));
    }
    CHECK(std::abs(s.delta[0]) < 0.1);
  }
  SUBCASE("just above the bound: deflection blows past its cap") {
    HopperModel model = oscillator_model();
    HopperState s = initial_state(model, 0.0);
    s.p.z = 5.0;
    s.delta[0] = 0.01;
    ContactState contact;
    IntegratorScratch scratch;
    CHECK_THROWS_AS(
        [&] {
          for (int i = 0; i < 2000; ++i) {
            step(model, s, contact, scratch, ActuationInput{}, 0.21);
          }
        }(),
        NumericalInstability);
  }
}

TEST_CASE("quiescent ballistic flight conserves energy and hits the apex") {
  Config config;
  HopperModel model = default_aluminum_model(&config);
  HopperState s = initial_state(model, 0.0);
  s.p.z = 3.0;
  s.v = {0.3, 0.1, 2.0};
  ContactState contact;
  IntegratorScratch scratch;

  const double dt = 1.0e-4;
  const double e0 = mechanical_energy(model, s);
  const double apex_analytic =
      3.0 + (2.0 * 2.0) / (2.0 * config.sim.gravity_m_s2);
  double apex = s.p.z;
  double max_drift = 0.0;
  double max_deflection = 0.0;
  for (int i = 0; i < 5000; ++i) {  // 0.5 s of flight
    step(model, s, contact, scratch, ActuationInput{}, dt);
    apex = std::max(apex, s.p.z);
    max_drift = std::max(max_drift,
                         std::abs(mechanical_energy(model, s) - e0));
    for (double d : s.delta) {
      max_deflection = std::max(max_deflection, std::abs(d));
    }
  }
  CHECK_FALSE(contact.in_contact);
  CHECK(max_drift / std::abs(e0) < 1.0e-3);
  // discrete apex undershoots the continuous one by about g*t_apex*dt/2
  CHECK(apex == doctest::Approx(apex_analytic).epsilon(1e-4));
  // free-fall consistent frame terms keep the springs exactly quiet
  CHECK(max_deflection < 1.0e-12);
  CHECK(s.l_s == doctest::Approx(model.travel_min_m).epsilon(1e-12));
  // horizontal velocity untouched by gravity
  CHECK(s.v.x == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s.v.y == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("internal motion does not leak linear momentum") {
  Config c = default_config();
  c.sim.gravity_m_s2 = 0.0;
  const MaterialSpec mat{"pvc", 1390.0, 3.0e9, AshbyClass::PolymerNatural,
                         false};
  const SegmentedLeg leg = build_leg(
      {mat, mat, mat}, c.geometry.segment_radius_m, c.geometry.leg_length_m,
      c.geometry.damping_ratio);
  HopperModel model = build_model(c, leg);

  HopperState s = initial_state(model, 0.0);
  s.p.z = 3.0;
  s.v = {0.5, 0.0, 0.3};
  s.thetadot_x = 0.5;      // swing the leg
  s.delta_dot[1] = 0.05;   // ring the chain
  ContactState contact;
  IntegratorScratch scratch;

  const Vec3 p0 = linear_momentum(model, s);
  const double dt = 1.0e-4;
  for (int i = 0; i < 10000; ++i) {
    step(model, s, contact, scratch, ActuationInput{}, dt);
  }
  const Vec3 p1 = linear_momentum(model, s);
  CHECK((p1 - p0).norm() / p0.norm() < 1.0e-3);
  CHECK_FALSE(contact.in_contact);
}

TEST_CASE("standing geometry and the leg axis") {
  Config config;
  HopperModel model = default_aluminum_model(&config);
  // hip offset + retracted travel + seat gap + three segment lengths
  CHECK(model.standing_height_m == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(model.leg_length_m == doctest::Approx(1.35).epsilon(1e-12));

  HopperState s = initial_state(model, 0.02);
  CHECK(s.p.z == doctest::Approx(1.12).epsilon(1e-12));
  CHECK(s.l_s == doctest::Approx(model.travel_min_m).epsilon(1e-15));

  const Vec3 axis = leg_axis(s);
  CHECK(axis.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(axis.y == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(axis.z == doctest::Approx(-1.0).epsilon(1e-15));

  const Vec3 foot = foot_position(model, s);
  CHECK(foot.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(foot.z == doctest::Approx(0.02).epsilon(1e-12));

  SUBCASE("axis follows the leg angles") {
    s.theta_y = 0.3;  // tip the foot toward +x
    const Vec3 tipped = leg_axis(s);
    CHECK(tipped.x == doctest::Approx(std::sin(0.3)).epsilon(1e-12));
    CHECK(tipped.z == doctest::Approx(-std::cos(0.3)).epsilon(1e-12));
    CHECK(tipped.norm() == doctest::Approx(1.0).epsilon(1e-12));

    s.theta_y = 0.0;
    s.theta_x = -0.2;  // tip the foot toward -y
    const Vec3 tipped2 = leg_axis(s);
    CHECK(tipped2.y == doctest::Approx(std::sin(-0.2)).epsilon(1e-12));
    CHECK(tipped2.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("base attitude rotates the axis the same way") {
    s.phi.y = 0.3;  // pitch the base; leg straight in the base frame
    const Vec3 rotated = leg_axis(s);
    CHECK(rotated.x == doctest::Approx(-std::sin(0.3)).epsilon(1e-12));
    CHECK(rotated.z == doctest::Approx(-std::cos(0.3)).epsilon(1e-12));
  }

  SUBCASE("deflections and travel extend the foot") {
    s.l_s = 0.1;
    s.delta[0] = 0.01;
    s.delta[2] = -0.02;
    const Vec3 extended = foot_position(model, s);
    CHECK(extended.z ==
          doctest::Approx(1.12 - (1.1 + 0.1 + 0.01 - 0.02)).epsilon(1e-12));
  }
}

TEST_CASE("released at a small drop, the hopper settles onto the ground") {
  Config config;
  HopperModel model = default_aluminum_model(&config);
  HopperState s = initial_state(model, 0.02);
  ContactState contact;
  IntegratorScratch scratch;

  const double dt = 2.0e-5;
  const int steps = static_cast<int>(4.0 / dt);
  for (int i = 0; i < steps; ++i) {
    step(model, s, contact, scratch, ActuationInput{}, dt);
  }
  CHECK(contact.in_contact);
  // weight borne by the ground
  const double weight = model.total_mass_kg * config.sim.gravity_m_s2;
  CHECK(contact.fn == doctest::Approx(weight).epsilon(0.05));
  // compressions are small: still near the standing height, not fallen over
  CHECK(s.p.z > model.standing_height_m - 0.1);
  CHECK(s.p.z < model.standing_height_m + 0.005);
  CHECK(std::abs(s.v.z) < 0.05);
  CHECK(std::abs(s.p.x) < 1e-6);
  CHECK(std::abs(s.p.y) < 1e-6);
  CHECK(std::abs(s.theta_x) < 1e-6);
  CHECK(std::abs(s.theta_y) < 1e-6);
  // chain compressed, not stretched
  CHECK(s.delta[0] < 0.0);
}

TEST_CASE("touchdown and liftoff events from a recorded phase column") {
  SimTrace trace;
  const double h = 1.0e-3;
  // 0.1 s flight, 0.08 s stance, 0.12 s flight with a 2-sample stance
  // glitch in the middle, 0.06 s stance, 0.05 s flight.
  auto extend = [&](int phase, int samples) {
    for (int i = 0; i < samples; ++i) {
      const double t = static_cast<double>(trace.t.size()) * h;
      trace.t.push_back(t);
      trace.phase.push_back(phase);
      trace.v_z.push_back(phase == 0 ? 1.0 - 2.0 * (t - std::floor(t)) : -0.1);
    }
  };
  extend(0, 100);
  extend(1, 80);
  extend(0, 60);
  extend(1, 2);  // contact chatter, shorter than the stance debounce
  extend(0, 58);
  extend(1, 60);
  extend(0, 60);  // long enough past the flight debounce to confirm

  const PhaseEvents ev = detect_phase_events(trace, 0.02, 0.05);
  REQUIRE(ev.touchdowns.size() == 2);
  REQUIRE(ev.liftoffs.size() == 2);
  CHECK(ev.touchdowns[0] == 100);
  CHECK(ev.liftoffs[0] == 180);
  CHECK(ev.touchdowns[1] == 300);
  CHECK(ev.liftoffs[1] == 360);

  SUBCASE("zero debounce keeps the glitch") {
    const PhaseEvents all = detect_phase_events(trace, 0.0, 0.0);
    CHECK(all.touchdowns.size() == 3);
    CHECK(all.liftoffs.size() == 3);
  }

  SUBCASE("empty trace throws") {
    SimTrace empty;
    CHECK_THROWS_AS(detect_phase_events(empty, 0.02, 0.05), EmptyTrace);
  }
}

TEST_CASE("apex indices come from vertical-rate sign changes in flight") {
  SimTrace trace;
  const double h = 1.0e-3;
  for (int i = 0; i < 400; ++i) {
    const double t = i * h;
    trace.t.push_back(t);
    // up for 0.1 s, down for 0.1 s, repeat; stance during 0.2..0.25
    const double cycle = std::fmod(t, 0.2);
    trace.v_z.push_back(cycle < 0.1 ? 1.0 : -1.0);
    trace.phase.push_back(t >= 0.28 && t < 0.33 ? 1 : 0);
  }
  const PhaseEvents ev = detect_phase_events(trace, 0.0, 0.0);
  REQUIRE(ev.apexes.size() == 1);
  // sign flips happen at 0.1 s and 0.3 s; the second lands inside stance
  CHECK(ev.apexes[0] == 100);
}

TEST_CASE("non-finite state is reported as instability") {
  HopperModel model = oscillator_model();
  HopperState s = initial_state(model, 0.0);
  s.p.z = 5.0;
  s.delta_dot[0] = std::numeric_limits<double>::quiet_NaN();
  ContactState contact;
  IntegratorScratch scratch;
  CHECK_THROWS_AS(step(model, s, contact, scratch, ActuationInput{}, 1e-4),
                  NumericalInstability);
}
