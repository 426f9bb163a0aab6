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

#include "hopsim/behavior.hpp"

#include <cmath>
#include <stdexcept>

namespace hopsim {

Vec2 reference_position(const BehaviorSpec& behavior, double t) {
  switch (behavior.kind) {
    case BehaviorKind::Static:
      return {0.0, 0.0};
    case BehaviorKind::Forward:
    case BehaviorKind::Ramp:
      // Speed is commanded in the horizontal plane on the ramp as well.
      return {behavior.speed_m_s * t, 0.0};
    case BehaviorKind::Circular: {
      const double omega = behavior.speed_m_s / behavior.radius_m;
      return {behavior.radius_m * std::cos(omega * t),
              behavior.radius_m * std::sin(omega * t)};
    }
  }
  throw std::invalid_argument("reference_position: unknown behavior kind");
}

Vec2 reference_velocity(const BehaviorSpec& behavior, double t) {
  switch (behavior.kind) {
    case BehaviorKind::Static:
      return {0.0, 0.0};
    case BehaviorKind::Forward:
    case BehaviorKind::Ramp:
      return {behavior.speed_m_s, 0.0};
    case BehaviorKind::Circular: {
      const double omega = behavior.speed_m_s / behavior.radius_m;
      return {-behavior.speed_m_s * std::sin(omega * t),
              behavior.speed_m_s * std::cos(omega * t)};
    }
  }
  throw std::invalid_argument("reference_velocity: unknown behavior kind");
}

Terrain behavior_terrain(const BehaviorSpec& behavior) {
  return Terrain{behavior.grade};
}

BehaviorSpec make_behavior(const std::string& name, const Config& config) {
  BehaviorSpec b;
  b.name = name;
  b.duration_s = config.sim.duration_s;
  b.cutoff_s = config.sim.cutoff_s;
  if (name == "static") {
    b.kind = BehaviorKind::Static;
  } else if (name == "forward") {
    b.kind = BehaviorKind::Forward;
    b.speed_m_s = config.behavior.forward_speed_m_s;
  } else if (name == "ramp") {
    b.kind = BehaviorKind::Ramp;
    b.speed_m_s = config.behavior.forward_speed_m_s;
    b.grade = config.behavior.ramp_grade;
  } else if (name == "circular") {
    b.kind = BehaviorKind::Circular;
    b.speed_m_s = config.behavior.circle_speed_m_s;
    b.radius_m = config.behavior.circle_radius_m;
  } else {
    throw std::invalid_argument("make_behavior: unknown behavior '" + name +
                                "'");
  }
  if (b.speed_m_s < 0.0) {
    throw std::invalid_argument("make_behavior: speed must be >= 0");
  }
  if (b.kind == BehaviorKind::Circular && !(b.radius_m > 0.0)) {
    throw std::invalid_argument("make_behavior: circle radius must be > 0");
  }
  if (!(b.duration_s > b.cutoff_s)) {
    throw std::invalid_argument(
        "make_behavior: duration must exceed the metrics cutoff");
  }
  return b;
}

std::vector<std::string> behavior_names() {
  return {"static", "forward", "ramp", "circular"};
}

}  // namespace hopsim
