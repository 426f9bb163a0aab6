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

#include "hopsim/material.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hopsim {

namespace {
constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

bool AshbyBounds::contains(double density_kg_m3, double modulus_pa) const {
  return density_kg_m3 >= density_min_kg_m3 &&
         density_kg_m3 <= density_max_kg_m3 &&
         modulus_pa >= modulus_min_pa && modulus_pa <= modulus_max_pa;
}

AshbyBounds ashby_bounds(AshbyClass cls) {
  switch (cls) {
    case AshbyClass::MetalCeramic:
      return {1.75e3, 2.25e4, 11.0e9, 1000.0e9};
    case AshbyClass::PolymerNatural:
      return {5.0e2, 3.5e3, 0.1e9, 9.0e9};
  }
  throw std::invalid_argument("unknown Ashby class");
}

double porosity(double density_bulk_kg_m3, double density_solid_kg_m3) {
  require(density_solid_kg_m3 > 0.0, "porosity: solid density must be > 0");
  require(density_bulk_kg_m3 > 0.0, "porosity: bulk density must be > 0");
  require(density_bulk_kg_m3 <= density_solid_kg_m3,
          "porosity: bulk density exceeds solid density");
  return 1.0 - density_bulk_kg_m3 / density_solid_kg_m3;
}

double bulk_density(double phi, double density_solid_kg_m3) {
  require(phi >= 0.0 && phi < 1.0, "bulk_density: porosity must be in [0, 1)");
  require(density_solid_kg_m3 > 0.0,
          "bulk_density: solid density must be > 0");
  return (1.0 - phi) * density_solid_kg_m3;
}

double segment_mass(double density_kg_m3, double radius_m, double length_m) {
  require(density_kg_m3 > 0.0, "segment_mass: density must be > 0");
  require(radius_m > 0.0, "segment_mass: radius must be > 0");
  require(length_m > 0.0, "segment_mass: length must be > 0");
  return density_kg_m3 * kPi * radius_m * radius_m * length_m;
}

double segment_stiffness(double modulus_pa, double radius_m,
                         double length_m) {
  require(modulus_pa > 0.0, "segment_stiffness: modulus must be > 0");
  require(radius_m > 0.0, "segment_stiffness: radius must be > 0");
  require(length_m > 0.0, "segment_stiffness: length must be > 0");
  const double r2 = radius_m * radius_m;
  const double area_moment = kPi * r2 * r2 / 4.0;
  return 3.0 * modulus_pa * area_moment / (length_m * length_m * length_m);
}

double series_stiffness(std::span<const double> stiffness_n_m) {
  require(!stiffness_n_m.empty(), "series_stiffness: empty stiffness list");
  double sum_inverse = 0.0;
  for (double k : stiffness_n_m) {
    require(k > 0.0 && std::isfinite(k),
            "series_stiffness: stiffnesses must be positive and finite");
    sum_inverse += 1.0 / k;
  }
  return 1.0 / sum_inverse;
}

double damping_coefficient(double zeta, double stiffness_n_m,
                           double mass_kg) {
  require(zeta >= 0.0, "damping_coefficient: zeta must be >= 0");
  require(stiffness_n_m > 0.0, "damping_coefficient: stiffness must be > 0");
  require(mass_kg > 0.0, "damping_coefficient: mass must be > 0");
  return 2.0 * zeta * std::sqrt(stiffness_n_m * mass_kg);
}

SegmentedLeg build_leg(const std::vector<MaterialSpec>& segment_materials,
                       double radius_m, double total_length_m, double zeta) {
  require(!segment_materials.empty(), "build_leg: no segment materials");
  require(radius_m > 0.0, "build_leg: radius must be > 0");
  require(total_length_m > 0.0, "build_leg: total length must be > 0");

  const auto n = segment_materials.size();
  const double length_m = total_length_m / static_cast<double>(n);

  SegmentedLeg leg;
  leg.total_length_m = total_length_m;
  leg.rigid = segment_materials.front().rigid;
  leg.segments.reserve(n);

  std::vector<double> stiffness;
  stiffness.reserve(n);
  for (const MaterialSpec& mat : segment_materials) {
    require(mat.rigid == leg.rigid,
            "build_leg: cannot mix rigid and elastic segments");
    SegmentSpec seg;
    seg.length_m = length_m;
    seg.radius_m = radius_m;
    seg.mass_kg = segment_mass(mat.density_kg_m3, radius_m, length_m);
    seg.rigid = mat.rigid;
    if (!mat.rigid) {
      seg.stiffness_n_m = segment_stiffness(mat.modulus_pa, radius_m,
                                            length_m);
      seg.damping_n_s_m =
          damping_coefficient(zeta, seg.stiffness_n_m, seg.mass_kg);
      stiffness.push_back(seg.stiffness_n_m);
    }
    leg.total_mass_kg += seg.mass_kg;
    leg.segments.push_back(seg);
  }
  if (!leg.rigid) {
    leg.equivalent_stiffness_n_m = series_stiffness(stiffness);
  }
  return leg;
}

void validate_against_ashby(const MaterialSpec& material,
                            const AshbyBounds& bounds) {
  if (material.rigid) return;
  if (!bounds.contains(material.density_kg_m3, material.modulus_pa)) {
    throw std::invalid_argument("material '" + material.name +
                                "' lies outside its Ashby class bounds");
  }
}

MaterialCatalog::MaterialCatalog()
    : metal_ceramic_(ashby_bounds(AshbyClass::MetalCeramic)),
      polymer_natural_(ashby_bounds(AshbyClass::PolymerNatural)) {}

MaterialCatalog::MaterialCatalog(const AshbyBounds& metal_ceramic,
                                 const AshbyBounds& polymer_natural)
    : metal_ceramic_(metal_ceramic), polymer_natural_(polymer_natural) {}

const AshbyBounds& MaterialCatalog::bounds(AshbyClass cls) const {
  return cls == AshbyClass::MetalCeramic ? metal_ceramic_ : polymer_natural_;
}

void MaterialCatalog::add(const MaterialSpec& material) {
  require(!material.name.empty(), "catalog: material needs a name");
  require(!contains(material.name),
          "catalog: duplicate material '" + material.name + "'");
  validate_against_ashby(material, bounds(material.ashby));
  entries_.push_back(material);
}

const MaterialSpec& MaterialCatalog::at(const std::string& name) const {
  for (const MaterialSpec& m : entries_) {
    if (m.name == name) return m;
  }
  throw std::invalid_argument("catalog: unknown material '" + name + "'");
}

bool MaterialCatalog::contains(const std::string& name) const {
  for (const MaterialSpec& m : entries_) {
    if (m.name == name) return true;
  }
  return false;
}

}  // namespace hopsim
