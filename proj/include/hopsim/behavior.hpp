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

#ifndef HOPSIM_BEHAVIOR_HPP_
#define HOPSIM_BEHAVIOR_HPP_

#include <string>

#include "hopsim/config.hpp"
#include "hopsim/vec.hpp"

namespace hopsim {

enum class BehaviorKind {
  Static,    // hold position at the origin
  Forward,   // straight line at constant speed on flat ground
  Ramp,      // straight line up a constant grade
  Circular,  // constant-radius circle at constant tangential speed
};

// A locomotion task: the horizontal-plane reference trajectory plus the
// terrain it runs on.
struct BehaviorSpec {
  BehaviorKind kind = BehaviorKind::Static;
  std::string name;       // "static", "forward", "ramp", "circular"
  double speed_m_s = 0.0;
  double grade = 0.0;      // terrain slope along +x, rise over run
  double radius_m = 0.0;   // Circular only
  double duration_s = 60.0;
  double cutoff_s = 20.0;  // metrics discard [0, cutoff)
};

// Planar terrain z = grade * x.
struct Terrain {
  double grade = 0.0;

  double height(double x, double /*y*/) const { return grade * x; }
  // Unit upward surface normal.
  Vec3 normal() const {
    const double inv = 1.0 / std::sqrt(1.0 + grade * grade);
    return {-grade * inv, 0.0, inv};
  }
};

/// Reference position X_d(t) in horizontal-plane coordinates.
Vec2 reference_position(const BehaviorSpec& behavior, double t);

/// Reference velocity dX_d/dt; consistent with reference_position.
Vec2 reference_velocity(const BehaviorSpec& behavior, double t);

Terrain behavior_terrain(const BehaviorSpec& behavior);

/// Constructs one of the four standard behaviors ("static", "forward",
/// "ramp", "circular") from config parameters. Throws std::invalid_argument
/// for unknown names or non-physical parameters.
BehaviorSpec make_behavior(const std::string& name, const Config& config);

/// The standard behavior list in presentation order.
std::vector<std::string> behavior_names();

}  // namespace hopsim

#endif  // HOPSIM_BEHAVIOR_HPP_
