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

#include "hopsim/controller.hpp"
#include "hopsim/dynamics.hpp"

using namespace hopsim;

TEST_CASE("foot placement is the neutral point plus a velocity correction") {
  const Vec2 p = foot_placement({1.0, -0.5}, {0.8, 0.2}, 0.17, 0.04);
  CHECK(p.x == doctest::Approx(0.093).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(-0.0705).epsilon(1e-12));

  // zero correction gain leaves the pure neutral point
  const Vec2 n = foot_placement({1.0, 0.0}, {0.0, 0.0}, 0.2, 0.0);
  CHECK(n.x == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(n.y == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("velocity command blends position error with its previous value") {
  const Vec2 a = desired_velocity({2.0, 0.0}, {0.5, 0.0}, 0.8, 0.5, 1.5);
  CHECK(a.x == doctest::Approx(-1.35).epsilon(1e-12));
  CHECK(a.y == doctest::Approx(0.0).epsilon(1e-15));

  SUBCASE("the command is norm-limited, not per-axis") {
    const Vec2 b = desired_velocity({-2.0, 0.0}, {0.25, 0.0}, 0.8, 0.5, 1.5);
    CHECK(b.x == doctest::Approx(1.5).epsilon(1e-12));

    const Vec2 c = desired_velocity({-2.0, -2.0}, {0.0, 0.0}, 0.8, 0.5, 1.5);
    CHECK(c.norm() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(c.x == doctest::Approx(1.0606601717798212).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(1.0606601717798212).epsilon(1e-12));

    const Vec2 d = desired_velocity({-1.0, -1.0}, {0.0, 0.0}, 0.8, 0.5, 1.5);
    CHECK(d.x == doctest::Approx(0.8).epsilon(1e-12));  // inside the limit
    CHECK(d.y == doctest::Approx(0.8).epsilon(1e-12));
  }
}

TEST_CASE("phase servo signs: restoring on the leg, righting on the base") {
  // flight: positive angle error gives negative (restoring) leg torque
  CHECK(flight_leg_pd(0.1, -0.2, 60.0, 4.0) ==
        doctest::Approx(-5.2).epsilon(1e-12));
  CHECK(flight_leg_pd(-0.1, 0.0, 60.0, 4.0) > 0.0);

  // stance: positive attitude error gives positive leg torque, whose
  // reaction on the base is negative, hence restoring
  CHECK(stance_attitude_pd(0.05, 0.1, 120.0, 10.0) ==
        doctest::Approx(7.0).epsilon(1e-12));
  CHECK(stance_attitude_pd(-0.05, 0.0, 120.0, 10.0) < 0.0);
}

TEST_CASE("thrust adaptation steps toward the desired apex and clamps") {
  CHECK(thrust_update(300.0, 40.0, 1.0, 0.8, 0.0, 1500.0) ==
        doctest::Approx(308.0).epsilon(1e-12));
  CHECK(thrust_update(300.0, 40.0, 1.0, 1.0, 0.0, 1500.0) ==
        doctest::Approx(300.0).epsilon(1e-12));
  CHECK(thrust_update(300.0, 40.0, 1.0, 1.3, 0.0, 1500.0) ==
        doctest::Approx(288.0).epsilon(1e-12));
  CHECK(thrust_update(1495.0, 40.0, 1.0, 0.5, 0.0, 1500.0) == 1500.0);
  CHECK(thrust_update(10.0, 40.0, 1.0, 2.0, 0.0, 1500.0) == 0.0);
}

TEST_CASE("leg inverse kinematics") {
  SUBCASE("straight down is the zero pose") {
    const LegAngles a = leg_ik({0.0, 0.0}, {0.0, 0.0, 0.0}, 1.35);
    CHECK(a.theta_x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(a.theta_y == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("round trip through the forward leg axis") {
    const Vec2 target{0.3, -0.2};
    const Vec3 attitude{0.05, -0.1, 0.0};
    const LegAngles a = leg_ik(target, attitude, 1.35);

    HopperState s;
    s.phi = attitude;
    s.theta_x = a.theta_x;
    s.theta_y = a.theta_y;
    const Vec3 axis = leg_axis(s);
    CHECK(axis.x * 1.35 == doctest::Approx(target.x).epsilon(1e-12));
    CHECK(axis.y * 1.35 == doctest::Approx(target.y).epsilon(1e-12));
    CHECK(axis.z < 0.0);
  }

  SUBCASE("level base, pure x target tips theta_y only") {
    const LegAngles a = leg_ik({0.5, 0.0}, {0.0, 0.0, 0.0}, 1.0);
    CHECK(a.theta_x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(a.theta_y == doctest::Approx(std::asin(0.5)).epsilon(1e-12));
  }

  SUBCASE("targets at or past the leg length are unreachable") {
    CHECK_THROWS_AS(leg_ik({1.4, 0.0}, {0.0, 0.0, 0.0}, 1.35), Unreachable);
    CHECK_THROWS_AS(leg_ik({1.35, 0.0}, {0.0, 0.0, 0.0}, 1.35), Unreachable);
    CHECK_NOTHROW(leg_ik({1.3499, 0.0}, {0.0, 0.0, 0.0}, 1.35));
  }

  SUBCASE("extreme pitch turns a far target upward in the base frame") {
    CHECK_THROWS_AS(leg_ik({0.9, 0.0}, {0.0, 1.2, 0.0}, 1.0), Unreachable);
  }

  SUBCASE("bad leg length is an argument error") {
    CHECK_THROWS_AS(leg_ik({0.1, 0.0}, {0.0, 0.0, 0.0}, 0.0),
                    std::invalid_argument);
  }
}

namespace {

ControllerConfig test_config() { return ControllerConfig{}; }

HopperState state_at(double t, double pz = 1.1, double vz = 0.0) {
  HopperState s;
  s.t = t;
  s.p = {0.0, 0.0, pz};
  s.v = {0.0, 0.0, vz};
  return s;
}

ContactState contact_with(double fn) {
  ContactState c;
  c.fn = fn;
  c.in_contact = fn > 0.0;
  return c;
}

BehaviorSpec static_behavior() {
  BehaviorSpec b;
  b.kind = BehaviorKind::Static;
  b.name = "static";
  return b;
}

}  // namespace

TEST_CASE("velocity command updates on the control tick, not every call") {
  Controller ctl(test_config(), static_behavior(), Terrain{}, 1.35, 1.1);

  HopperState s = state_at(0.0);
  s.p.x = 1.0;  // standing one meter past the reference
  ctl.update(s, contact_with(0.0));
  CHECK(ctl.velocity_command().x == doctest::Approx(-0.8).epsilon(1e-12));

  s.t = 0.004;  // between ticks: command must hold
  ctl.update(s, contact_with(0.0));
  CHECK(ctl.velocity_command().x == doctest::Approx(-0.8).epsilon(1e-12));

  s.t = 0.01;
  ctl.update(s, contact_with(0.0));
  CHECK(ctl.velocity_command().x == doctest::Approx(-1.2).epsilon(1e-12));

  s.t = 0.02;
  ctl.update(s, contact_with(0.0));
  CHECK(ctl.velocity_command().x == doctest::Approx(-1.4).epsilon(1e-12));

  // the recursion saturates at the speed limit
  s.t = 0.03;
  ctl.update(s, contact_with(0.0));
  CHECK(ctl.velocity_command().x == doctest::Approx(-1.5).epsilon(1e-12));
  s.t = 0.04;
  ctl.update(s, contact_with(0.0));
  CHECK(ctl.velocity_command().x == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("phase transitions confirm only after the debounce hold") {
  Controller ctl(test_config(), static_behavior(), Terrain{}, 1.35, 1.1);

  // floor contact must hold 20 ms before stance is confirmed
  ctl.update(state_at(0.0), contact_with(50.0));
  CHECK(ctl.phase() == ControlPhase::Flight);
  ctl.update(state_at(0.02), contact_with(50.0));
  CHECK(ctl.phase() == ControlPhase::Stance);

  // a 5 ms force dropout mid-stance clears without ending the stance
  ctl.update(state_at(0.05), contact_with(0.0));
  CHECK(ctl.phase() == ControlPhase::Stance);
  ctl.update(state_at(0.055), contact_with(60.0));
  CHECK(ctl.phase() == ControlPhase::Stance);
  CHECK(ctl.completed_hops() == 0);

  // sustained unload: liftoff confirmed after the flight hold
  ctl.update(state_at(0.2), contact_with(0.0));
  CHECK(ctl.phase() == ControlPhase::Stance);
  ctl.update(state_at(0.3), contact_with(0.0));
  CHECK(ctl.phase() == ControlPhase::Stance);
  ctl.update(state_at(0.4), contact_with(0.0));
  CHECK(ctl.phase() == ControlPhase::Flight);
  CHECK(ctl.completed_hops() == 1);

  // a touchdown bounce shorter than the hold does not start a stance
  ctl.update(state_at(0.5), contact_with(10.0));
  ctl.update(state_at(0.51), contact_with(0.0));
  ctl.update(state_at(0.6), contact_with(10.0));
  CHECK(ctl.phase() == ControlPhase::Flight);
  ctl.update(state_at(0.62), contact_with(10.0));
  CHECK(ctl.phase() == ControlPhase::Stance);
}

TEST_CASE("thrust fires once per stance inside the upward-loaded window") {
  Controller ctl(test_config(), static_behavior(), Terrain{}, 1.35, 1.1);

  // stance confirmed after its hold, still compressing: no thrust
  ctl.update(state_at(0.0, 1.05, -0.3), contact_with(80.0));
  ActuationInput u =
      ctl.update(state_at(0.02, 1.05, -0.3), contact_with(80.0));
  CHECK(ctl.phase() == ControlPhase::Stance);
  CHECK(u.tau3_n == 0.0);

  // moving up while loaded: thrust on, at the seed value for the first hop
  u = ctl.update(state_at(0.03, 1.05, 0.4), contact_with(90.0));
  CHECK(u.tau3_n == doctest::Approx(300.0).epsilon(1e-12));

  // window reopening in the same stance keeps the same force
  u = ctl.update(state_at(0.04, 1.06, -0.05), contact_with(85.0));
  CHECK(u.tau3_n == 0.0);
  u = ctl.update(state_at(0.05, 1.06, 0.5), contact_with(85.0));
  CHECK(u.tau3_n == doctest::Approx(300.0).epsilon(1e-12));

  // liftoff, apex 0.8 m above standing, touchdown: thrust adapts upward
  ctl.update(state_at(0.08, 1.3, 1.2), contact_with(0.0));
  ctl.update(state_at(0.28, 1.7, 0.6), contact_with(0.0));
  CHECK(ctl.phase() == ControlPhase::Flight);
  CHECK(ctl.completed_hops() == 1);
  ctl.update(state_at(0.4, 1.9, 0.0), contact_with(0.0));     // apex sample
  ctl.update(state_at(0.8, 1.12, -1.0), contact_with(70.0));  // touchdown
  ctl.update(state_at(0.82, 1.08, -0.8), contact_with(90.0));
  CHECK(ctl.phase() == ControlPhase::Stance);
  CHECK(ctl.last_apex_m() == doctest::Approx(0.8).epsilon(1e-12));
  u = ctl.update(state_at(0.84, 1.05, 0.3), contact_with(120.0));
  CHECK(u.tau3_n == doctest::Approx(308.0).epsilon(1e-12));

  // never thrust in flight
  ctl.update(state_at(0.9, 1.2, 1.0), contact_with(0.0));
  u = ctl.update(state_at(1.1, 1.4, 0.8), contact_with(0.0));
  CHECK(ctl.phase() == ControlPhase::Flight);
  CHECK(u.tau3_n == 0.0);
}

TEST_CASE("stance period estimate holds its seed through the warmup hops") {
  Controller ctl(test_config(), static_behavior(), Terrain{}, 1.35, 1.1);

  double t = 0.0;
  for (int hop = 1; hop <= 5; ++hop) {
    ctl.update(state_at(t), contact_with(60.0));         // touchdown onset
    ctl.update(state_at(t + 0.02), contact_with(60.0));  // stance confirmed
    ctl.update(state_at(t + 0.2), contact_with(0.0));    // liftoff onset
    ctl.update(state_at(t + 0.4), contact_with(0.0));    // flight confirmed
    CHECK(ctl.completed_hops() == hop);
    if (hop <= 3) {
      CHECK(ctl.stance_period_estimate_s() ==
            doctest::Approx(0.17).epsilon(1e-12));
    }
    t += 0.5;  // a 0.3 s flight before the next touchdown
  }
  // two filtered updates after the warmup: 0.17 -> 0.179 -> 0.1853
  CHECK(ctl.stance_period_estimate_s() ==
        doctest::Approx(0.7 * (0.7 * 0.17 + 0.3 * 0.2) + 0.3 * 0.2)
            .epsilon(1e-12));
}

TEST_CASE("flight steers the leg toward the upcoming touchdown point") {
  Controller ctl(test_config(), static_behavior(), Terrain{}, 1.35, 1.1);

  // moving forward: the leg must swing forward (positive theta_y torque)
  HopperState s = state_at(0.0, 1.5, 0.2);
  s.v.x = 1.0;
  ActuationInput u = ctl.update(s, contact_with(0.0));
  CHECK(u.tau2_n_m > 0.0);
  CHECK(u.tau1_n_m == doctest::Approx(0.0).epsilon(1e-9));

  // a large error plus swing rate saturates at the torque limit
  s.theta_y = -1.2;
  s.thetadot_y = -30.0;
  u = ctl.update(s, contact_with(0.0));
  CHECK(u.tau2_n_m == doctest::Approx(150.0).epsilon(1e-12));
}

TEST_CASE("stance rights the base attitude through the hip reaction") {
  Controller ctl(test_config(), static_behavior(), Terrain{}, 1.35, 1.1);

  HopperState s = state_at(0.0, 1.05, -0.1);
  s.phi = {0.05, 0.0, 0.0};
  s.phidot = {0.1, 0.0, 0.0};
  ctl.update(s, contact_with(100.0));
  s.t = 0.02;  // past the touchdown hold
  ActuationInput u = ctl.update(s, contact_with(100.0));
  CHECK(ctl.phase() == ControlPhase::Stance);
  CHECK(u.tau1_n_m == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(u.tau2_n_m == doctest::Approx(0.0).epsilon(1e-15));
}
