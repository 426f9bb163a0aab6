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
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hopsim/material.hpp"

using namespace hopsim;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

// Independent route: accumulate reciprocals in long double, back to front.
long double harmonic_oracle(const std::vector<double>& ks) {
  long double s = 0.0L;
  for (auto it = ks.rbegin(); it != ks.rend(); ++it) s += 1.0L / *it;
  return 1.0L / s;
}

}  // namespace

TEST_CASE("porosity of a half-dense foam is 0.5") {
  CHECK(porosity(500.0, 1000.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(porosity(1000.0, 1000.0) == doctest::Approx(0.0));
}

TEST_CASE("porosity rejects out-of-range densities") {
  CHECK_THROWS_AS(porosity(1100.0, 1000.0), std::invalid_argument);
  CHECK_THROWS_AS(porosity(0.0, 1000.0), std::invalid_argument);
  CHECK_THROWS_AS(porosity(500.0, 0.0), std::invalid_argument);
}

TEST_CASE("porosity and bulk_density are inverses") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> phi_dist(0.0, 0.99);
  std::uniform_real_distribution<double> rho_dist(100.0, 2.0e4);
  for (int i = 0; i < 200; ++i) {
    const double phi = phi_dist(rng);
    const double rho_s = rho_dist(rng);
    const double rho_b = bulk_density(phi, rho_s);
    CHECK(rel_err(porosity(rho_b, rho_s) + 1.0, phi + 1.0) < 1e-14);
  }
}

TEST_CASE("segment mass matches rho*pi*r^2*L") {
  CHECK(rel_err(segment_mass(1000.0, 0.05, 0.2), 1.5707963267948966) < 1e-14);
  CHECK(rel_err(segment_mass(8000.0, 0.02, 0.1), 1.0053096491487339) < 1e-14);
}

TEST_CASE("segment stiffness matches 3EI/L^3 reference points") {
  // Hand-derived with I = pi*r^4/4 at extended precision.
  CHECK(rel_err(segment_stiffness(200e9, 0.02, 0.5), 603185.7894892403) <
        1e-13);
  CHECK(rel_err(segment_stiffness(3e9, 0.02, 0.5), 9047.786842338604) <
        1e-13);
  CHECK(rel_err(segment_stiffness(114e9, 0.05, 0.25), 107442468.75277093) <
        1e-13);
  CHECK(rel_err(segment_stiffness(0.1e9, 0.01, 0.2), 294.5243112740431) <
        1e-13);
}

TEST_CASE("segment stiffness scaling laws") {
  const double k0 = segment_stiffness(69e9, 0.01, 0.4);
  SUBCASE("quadrupling the radius multiplies k by 256") {
    CHECK(rel_err(segment_stiffness(69e9, 0.04, 0.4), 256.0 * k0) < 1e-9);
  }
  SUBCASE("doubling the length divides k by 8") {
    CHECK(rel_err(segment_stiffness(69e9, 0.01, 0.8), k0 / 8.0) < 1e-9);
  }
  SUBCASE("stiffness is linear in the modulus") {
    CHECK(rel_err(segment_stiffness(138e9, 0.01, 0.4), 2.0 * k0) < 1e-12);
  }
}

TEST_CASE("series stiffness of [3, 6] is 2") {
  const std::vector<double> ks{3.0, 6.0};
  CHECK(series_stiffness(ks) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("series stiffness equals n identical springs divided by n") {
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> ks(n, 7.5e4);
    CHECK(rel_err(series_stiffness(ks), 7.5e4 / n) < 1e-13);
  }
}

TEST_CASE("series stiffness matches harmonic oracle on random lists") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> k_dist(1.0, 1.0e9);
  std::uniform_int_distribution<int> n_dist(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> ks(n_dist(rng));
    for (double& k : ks) k = k_dist(rng);
    const double got = series_stiffness(ks);
    const double want = static_cast<double>(harmonic_oracle(ks));
    CHECK(rel_err(got, want) < 1e-12);
    // Never stiffer than the softest spring.
    for (double k : ks) CHECK(got <= k * (1.0 + 1e-12));
  }
}

TEST_CASE("series stiffness rejects degenerate input") {
  CHECK_THROWS_AS(series_stiffness({}), std::invalid_argument);
  const std::vector<double> bad{3.0, 0.0};
  CHECK_THROWS_AS(series_stiffness(bad), std::invalid_argument);
}

TEST_CASE("damping coefficient") {
  CHECK(rel_err(damping_coefficient(0.05, 1.0e4, 4.0), 2.0 * 0.05 * 200.0) <
        1e-14);
  CHECK(damping_coefficient(0.0, 1.0e4, 4.0) == 0.0);
}

TEST_CASE("ashby bounds are closed intervals") {
  const AshbyBounds metal = ashby_bounds(AshbyClass::MetalCeramic);
  CHECK(metal.contains(1.75e3, 11e9));
  CHECK(metal.contains(2.25e4, 1000e9));
  CHECK_FALSE(metal.contains(1.74e3, 100e9));
  CHECK_FALSE(metal.contains(5e3, 10.9e9));

  const AshbyBounds poly = ashby_bounds(AshbyClass::PolymerNatural);
  CHECK(poly.contains(5.0e2, 0.1e9));
  CHECK(poly.contains(3.5e3, 9e9));
  CHECK_FALSE(poly.contains(4e2, 1e9));
  CHECK_FALSE(poly.contains(1e3, 10e9));
}

TEST_CASE("build_leg splits the length evenly and sums masses") {
  MaterialSpec steel{"ss", 8000.0, 200e9, AshbyClass::MetalCeramic, false};
  const SegmentedLeg leg = build_leg({steel, steel, steel}, 0.02, 1.0, 0.05);
  REQUIRE(leg.segments.size() == 3);
  const double L = 1.0 / 3.0;
  const double m = segment_mass(8000.0, 0.02, L);
  const double k = segment_stiffness(200e9, 0.02, L);
  for (const SegmentSpec& seg : leg.segments) {
    CHECK(rel_err(seg.length_m, L) < 1e-15);
    CHECK(rel_err(seg.mass_kg, m) < 1e-14);
    CHECK(rel_err(seg.stiffness_n_m, k) < 1e-14);
    CHECK(rel_err(seg.damping_n_s_m, damping_coefficient(0.05, k, m)) <
          1e-14);
  }
  CHECK(rel_err(leg.total_mass_kg, 3.0 * m) < 1e-14);
  CHECK(rel_err(leg.equivalent_stiffness_n_m, k / 3.0) < 1e-13);
  CHECK_FALSE(leg.rigid);
}

TEST_CASE("rigid leg has no spring chain") {
  MaterialSpec md{"md", 1000.0, 0.0, AshbyClass::PolymerNatural, true};
  const SegmentedLeg leg = build_leg({md}, 0.02, 1.0, 0.05);
  CHECK(leg.rigid);
  CHECK(leg.equivalent_stiffness_n_m == 0.0);
  CHECK(rel_err(leg.total_mass_kg, segment_mass(1000.0, 0.02, 1.0)) < 1e-14);
}

TEST_CASE("build_leg rejects mixed rigid/elastic chains") {
  MaterialSpec md{"md", 1000.0, 0.0, AshbyClass::PolymerNatural, true};
  MaterialSpec pvc{"pvc", 1390.0, 3e9, AshbyClass::PolymerNatural, false};
  CHECK_THROWS_AS(build_leg({md, pvc}, 0.02, 1.0, 0.05),
                  std::invalid_argument);
}

TEST_CASE("catalog validates entries against their Ashby class") {
  MaterialCatalog catalog;
  catalog.add({"pvc", 1390.0, 3e9, AshbyClass::PolymerNatural, false});
  catalog.add({"ss", 8000.0, 200e9, AshbyClass::MetalCeramic, false});
  catalog.add({"md", 1000.0, 0.0, AshbyClass::PolymerNatural, true});
  CHECK(catalog.contains("pvc"));
  CHECK(catalog.at("ss").density_kg_m3 == 8000.0);

  SUBCASE("out-of-class entry is rejected") {
    MaterialSpec bogus{"lead-ish", 1.0e5, 16e9, AshbyClass::MetalCeramic,
                       false};
    CHECK_THROWS_AS(catalog.add(bogus), std::invalid_argument);
  }
  SUBCASE("duplicate names are rejected") {
    CHECK_THROWS_AS(
        catalog.add({"pvc", 1390.0, 3e9, AshbyClass::PolymerNatural, false}),
        std::invalid_argument);
  }
  SUBCASE("misclassified polymer is rejected") {
    MaterialSpec bogus{"soft-steel", 8000.0, 200e9,
                       AshbyClass::PolymerNatural, false};
    CHECK_THROWS_AS(catalog.add(bogus), std::invalid_argument);
  }
}
