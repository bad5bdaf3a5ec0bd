#include <catch2/catch_amalgamated.hpp>

#include "spinsim/units.hpp"

using namespace spinsim;
using Catch::Matchers::WithinRel;

namespace {

PhysicalSetup paper_setup() {
  PhysicalSetup s;
  s.atom_count = 20000;
  s.atomic_mass = constants::rb87_mass;
  s.a0 = 101.9 * constants::bohr_radius;
  s.a2 = 100.4 * constants::bohr_radius;
  s.omega_z = 2.0 * constants::pi * 21.0;
  s.omega_perp = 2.0 * constants::pi * 891.0;
  return s;
}

}  // namespace

TEST_CASE("derive_couplings reproduces the defining formulas") {
  const PhysicalSetup s = paper_setup();
  const Couplings c = derive_couplings(s);

  const double pref =
      4.0 * constants::pi * constants::hbar * constants::hbar / (3.0 * s.atomic_mass);
  CHECK_THAT(c.c0_3d, WithinRel(pref * (s.a0 + 2.0 * s.a2), 1e-14));
  CHECK_THAT(c.c2_3d, WithinRel(pref * (s.a2 - s.a0), 1e-14));
  CHECK_THAT(c.c0_1d,
             WithinRel(c.c0_3d / (2.0 * constants::pi * c.a_perp * c.a_perp), 1e-14));
  CHECK_THAT(c.c2_1d,
             WithinRel(c.c2_3d / (2.0 * constants::pi * c.a_perp * c.a_perp), 1e-14));
}

TEST_CASE("87Rb couplings are ferromagnetic with the known magnitudes") {
  const Couplings c = derive_couplings(paper_setup());
  CHECK(c.c2_3d < 0.0);
  CHECK(c.c2_1d < 0.0);
  // Regression constants computed once from the formulas by a separate
  // arithmetic script.
  CHECK_THAT(c.c0_1d, WithinRel(6.3045780855e-39, 1e-9));
  CHECK_THAT(c.c2_1d, WithinRel(-3.1241714993e-41, 1e-9));
  CHECK_THAT(c.a_perp, WithinRel(3.6128665317e-07, 1e-9));
  // |c2/c0| = (a0 - a2)/(a0 + 2 a2) ~ 4.9e-3: spin interactions are weak.
  const double ratio = std::abs(c.c2_3d / c.c0_3d);
  CHECK_THAT(ratio, WithinRel(1.5 / 302.7, 0.10));
  CHECK_THAT(c.c2_1d / c.c0_1d, WithinRel(c.c2_3d / c.c0_3d, 1e-13));
}

TEST_CASE("equal scattering lengths give exactly zero spin coupling") {
  PhysicalSetup s = paper_setup();
  s.a2 = s.a0;
  const Couplings c = derive_couplings(s);
  CHECK(c.c2_3d == 0.0);
  CHECK(c.c2_1d == 0.0);
}

TEST_CASE("parameter validation rejects bad setups") {
  PhysicalSetup s = paper_setup();
  s.atomic_mass = -1;
  CHECK_THROWS_AS(derive_couplings(s), ValidationError);
  s = paper_setup();
  s.omega_z = 0;
  CHECK_THROWS_AS(derive_couplings(s), ValidationError);
  s = paper_setup();
  s.omega_perp = 5.0 * s.omega_z;  // not elongated enough
  CHECK_THROWS_AS(derive_couplings(s), ValidationError);
  s = paper_setup();
  s.atom_count = 0;
  CHECK_THROWS_AS(derive_couplings(s), ValidationError);
}

TEST_CASE("flip_spin_coupling_sign is an involution touching only c2") {
  const Couplings c = derive_couplings(paper_setup());
  const Couplings f = flip_spin_coupling_sign(c);
  CHECK(f.c2_3d == -c.c2_3d);
  CHECK(f.c2_1d == -c.c2_1d);
  CHECK(f.c0_3d == c.c0_3d);
  CHECK(f.c0_1d == c.c0_1d);
  const Couplings ff = flip_spin_coupling_sign(f);
  CHECK(ff.c2_3d == c.c2_3d);
  CHECK(ff.c2_1d == c.c2_1d);

  SimCouplings sc{0.19, -9.5e-4};
  CHECK(flip_spin_coupling_sign(sc).c2 == 9.5e-4);
  CHECK(flip_spin_coupling_sign(flip_spin_coupling_sign(sc)).c2 == sc.c2);
  SimCouplings zero{0.19, 0.0};
  CHECK(flip_spin_coupling_sign(zero).c2 == 0.0);
}

TEST_CASE("make_units produces the axial oscillator scales") {
  const PhysicalSetup s = paper_setup();
  const Couplings c = derive_couplings(s);
  const SimUnits u = make_units(s, c);

  // 1/(2 pi x 21 Hz) ~ 7.578 ms, cross-checked against the 47.6 ms trap period.
  CHECK_THAT(u.time_unit, WithinRel(7.5788068139e-3, 1e-9));
  CHECK_THAT(2.0 * constants::pi * u.time_unit, WithinRel(1.0 / 21.0, 1e-12));
  // a_z for 87Rb at 21 Hz ~ 2.35 um.
  CHECK_THAT(u.length_unit, WithinRel(2.3533207416e-6, 1e-9));
  CHECK_THAT(u.energy_unit, WithinRel(constants::hbar * s.omega_z, 1e-14));
}

TEST_CASE("dimensionless couplings agree with the independent ratio route") {
  const PhysicalSetup s = paper_setup();
  const SimUnits u = make_units(s, derive_couplings(s));
  // c0_sim = 2 (omega_perp/omega_z) * a_mean / a_z with a_mean = (a0+2a2)/3,
  // an algebraically independent reduction of the same definitions.
  const double a_mean = (s.a0 + 2.0 * s.a2) / 3.0;
  const double expect_c0 = 2.0 * (s.omega_perp / s.omega_z) * a_mean / u.length_unit;
  const double a_spin = (s.a2 - s.a0) / 3.0;
  const double expect_c2 = 2.0 * (s.omega_perp / s.omega_z) * a_spin / u.length_unit;
  CHECK_THAT(u.c0_sim, WithinRel(expect_c0, 1e-12));
  CHECK_THAT(u.c2_sim, WithinRel(expect_c2, 1e-12));
  // Frozen regression values for the paper parameters.
  CHECK_THAT(u.c0_sim, WithinRel(0.192530519011, 1e-9));
  CHECK_THAT(u.c2_sim, WithinRel(-9.540660010469e-4, 1e-9));
}

TEST_CASE("unit conversions round-trip") {
  const PhysicalSetup s = paper_setup();
  const SimUnits u = make_units(s, derive_couplings(s));
  for (double v : {1.234e-6, 5.0e-3, 42.0, 7.7e-28}) {
    CHECK_THAT(u.length_from_sim(u.length_to_sim(v)), WithinRel(v, 1e-12));
    CHECK_THAT(u.time_from_sim(u.time_to_sim(v)), WithinRel(v, 1e-12));
    CHECK_THAT(u.energy_from_sim(u.energy_to_sim(v)), WithinRel(v, 1e-12));
    CHECK_THAT(u.length_to_sim(u.length_from_sim(v)), WithinRel(v, 1e-12));
  }
}
