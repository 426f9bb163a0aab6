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

#ifndef HOPSIM_MATERIAL_HPP_
#define HOPSIM_MATERIAL_HPP_

#include <span>
#include <string>
#include <vector>

namespace hopsim {

// Material property chart region a material family occupies.
enum class AshbyClass {
  MetalCeramic,    ///< metals and technical ceramics
  PolymerNatural,  ///< polymers and natural materials
};

// Closed density/modulus rectangle for one Ashby class.
struct AshbyBounds {
  double density_min_kg_m3 = 0.0;
  double density_max_kg_m3 = 0.0;
  double modulus_min_pa = 0.0;
  double modulus_max_pa = 0.0;

  bool contains(double density_kg_m3, double modulus_pa) const;
};

/// Chart bounds for a class. Metals/ceramics span 1.75e3..2.25e4 kg/m^3 and
/// 11..1000 GPa; polymers/naturals span 5e2..3.5e3 kg/m^3 and 0.1..9 GPa.
AshbyBounds ashby_bounds(AshbyClass cls);

// A homogeneous leg material. `rigid` marks the baseline whose segments do
// not deform (no spring chain); its modulus is ignored.
struct MaterialSpec {
  std::string name;
  double density_kg_m3 = 0.0;
  double modulus_pa = 0.0;
  AshbyClass ashby = AshbyClass::MetalCeramic;
  bool rigid = false;
};

/// Porosity of a bulk material relative to its solid parent,
/// phi = 1 - rho_bulk/rho_solid. Requires 0 < rho_bulk <= rho_solid.
double porosity(double density_bulk_kg_m3, double density_solid_kg_m3);

/// Inverse of porosity(): bulk density at porosity phi in [0, 1).
double bulk_density(double phi, double density_solid_kg_m3);

/// Mass of a solid cylindrical segment, m = rho*pi*r^2*L.
double segment_mass(double density_kg_m3, double radius_m, double length_m);

/// Axial lumped stiffness of one segment modeled as a cantilever tip spring,
/// k = 3*E*I/L^3 with area moment I = pi*r^4/4.
double segment_stiffness(double modulus_pa, double radius_m, double length_m);

/// Equivalent stiffness of springs in series, 1/k_eq = sum(1/k_i).
/// Requires a nonempty list of positive stiffnesses.
double series_stiffness(std::span<const double> stiffness_n_m);

/// Per-segment damping c = 2*zeta*sqrt(k*m).
double damping_coefficient(double zeta, double stiffness_n_m, double mass_kg);

// One lumped segment of a leg chain: spring k_i above point mass m_i.
struct SegmentSpec {
  double length_m = 0.0;
  double radius_m = 0.0;
  double mass_kg = 0.0;
  double stiffness_n_m = 0.0;  // ignored when rigid
  double damping_n_s_m = 0.0;  // ignored when rigid
  bool rigid = false;
};

struct SegmentedLeg {
  std::vector<SegmentSpec> segments;
  double total_length_m = 0.0;
  double total_mass_kg = 0.0;
  double equivalent_stiffness_n_m = 0.0;  // series chain; 0 when rigid
  bool rigid = false;                     // true iff every segment is rigid
};

/// Builds an equal-length segment chain from per-segment materials. A leg is
/// rigid only if all its segments are rigid; mixing rigid and elastic
/// segments is rejected.
SegmentedLeg build_leg(const std::vector<MaterialSpec>& segment_materials,
                       double radius_m, double total_length_m, double zeta);

/// Throws std::invalid_argument when a non-rigid material lies outside the
/// given class rectangle. Rigid materials are exempt.
void validate_against_ashby(const MaterialSpec& material,
                            const AshbyBounds& bounds);

// Named material table, insertion-ordered. Entries are validated at add time
// against the catalog's class bounds (standard chart bounds by default).
class MaterialCatalog {
 public:
  MaterialCatalog();
  MaterialCatalog(const AshbyBounds& metal_ceramic,
                  const AshbyBounds& polymer_natural);

  void add(const MaterialSpec& material);
  const MaterialSpec& at(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<MaterialSpec>& entries() const { return entries_; }
  const AshbyBounds& bounds(AshbyClass cls) const;

 private:
  AshbyBounds metal_ceramic_;
  AshbyBounds polymer_natural_;
  std::vector<MaterialSpec> entries_;
};

}  // namespace hopsim

#endif  // HOPSIM_MATERIAL_HPP_
