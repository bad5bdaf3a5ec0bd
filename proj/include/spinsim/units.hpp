#pragma once

#include <cmath>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim {

// Physical inputs of a run: species constants, atom number, trap frequencies.
struct PhysicalSetup {
  double atom_count = 0;   // N
  double atomic_mass = 0;  // kg
  double a0 = 0;           // m, s-wave scattering length, total-spin-0 channel
  double a2 = 0;           // m, total-spin-2 channel
  double omega_z = 0;      // rad/s, axial trap
  double omega_perp = 0;   // rad/s, transverse trap
};

inline void validate(const PhysicalSetup& s) {
  if (!(s.atom_count > 0)) throw ValidationError("atom_count must be positive");
  if (!(s.atomic_mass > 0)) throw ValidationError("atomic_mass must be positive");
  if (!(s.omega_z > 0)) throw ValidationError("omega_z must be positive");
  if (!(s.omega_perp > 0)) throw ValidationError("omega_perp must be positive");
  if (!(s.omega_perp / s.omega_z >= 10.0))
    throw ValidationError("omega_perp/omega_z < 10: trap is not quasi-1D");
}

// 3D interaction strengths and their transverse-reduced 1D counterparts.
struct Couplings {
  double c0_3d = 0;   // J m^3
  double c2_3d = 0;   // J m^3
  double c0_1d = 0;   // J m
  double c2_1d = 0;   // J m
  double a_perp = 0;  // m, transverse oscillator length
};

// c0 = 4 pi hbar^2 (a0 + 2 a2) / (3 M), c2 = 4 pi hbar^2 (a2 - a0) / (3 M);
// the 1D forms divide by 2 pi a_perp^2 (gaussian transverse profile).
inline Couplings derive_couplings(const PhysicalSetup& s) {
  validate(s);
  Couplings c;
  const double pref =
      4.0 * constants::pi * constants::hbar * constants::hbar / (3.0 * s.atomic_mass);
  c.c0_3d = pref * (s.a0 + 2.0 * s.a2);
  c.c2_3d = pref * (s.a2 - s.a0);
  c.a_perp = std::sqrt(constants::hbar / (s.atomic_mass * s.omega_perp));
  const double reduction = 2.0 * constants::pi * c.a_perp * c.a_perp;
  c.c0_1d = c.c0_3d / reduction;
  c.c2_1d = c.c2_3d / reduction;
  return c;
}

inline Couplings flip_spin_coupling_sign(Couplings c) {
  c.c2_3d = -c.c2_3d;
  c.c2_1d = -c.c2_1d;
  return c;
}

// Dimensionless couplings in axial oscillator units, for fields normalized so
// that sum_m int |psi_m|^2 dz equals the total atom number.
struct SimCouplings {
  double c0 = 0;
  double c2 = 0;
};

inline SimCouplings flip_spin_coupling_sign(SimCouplings c) {
  c.c2 = -c.c2;
  return c;
}

// Axial oscillator units: a_z = sqrt(hbar/(M omega_z)), 1/omega_z, hbar*omega_z.
struct SimUnits {
  double length_unit = 0;  // m
  double time_unit = 0;    // s
  double energy_unit = 0;  // J
  double c0_sim = 0;
  double c2_sim = 0;
  // Normalization convention carried with the unit system: fields keep the
  // total atom number (couplings are not rescaled per particle).
  static constexpr const char* normalization = "sum_m int |psi_m|^2 dz = N";

  double length_to_sim(double meters) const { return meters / length_unit; }
  double length_from_sim(double x) const { return x * length_unit; }
  double time_to_sim(double seconds) const { return seconds / time_unit; }
  double time_from_sim(double x) const { return x * time_unit; }
  double energy_to_sim(double joules) const { return joules / energy_unit; }
  double energy_from_sim(double x) const { return x * energy_unit; }

  SimCouplings sim_couplings() const { return {c0_sim, c2_sim}; }
};

inline SimUnits make_units(const PhysicalSetup& s, const Couplings& c) {
  validate(s);
  SimUnits u;
  u.length_unit = std::sqrt(constants::hbar / (s.atomic_mass * s.omega_z));
  u.time_unit = 1.0 / s.omega_z;
  u.energy_unit = constants::hbar * s.omega_z;
  u.c0_sim = c.c0_1d / (u.energy_unit * u.length_unit);
  u.c2_sim = c.c2_1d / (u.energy_unit * u.length_unit);
  return u;
}

}  // namespace spinsim
