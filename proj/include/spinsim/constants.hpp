#pragma once

// Physical constants (CODATA 2018, 10 significant digits) plus the 87Rb
// species data used by the presets.

namespace spinsim::constants {

inline constexpr double pi = 3.14159265358979323846;

// Reduced Planck constant [J s]
inline constexpr double hbar = 1.054571817e-34;

// Bohr radius [m]
inline constexpr double bohr_radius = 5.291772109e-11;

// Unified atomic mass unit [kg]
inline constexpr double atomic_mass_unit = 1.660539067e-27;

// 87Rb atomic mass [u] and [kg]
inline constexpr double rb87_mass_u = 86.909180531;
inline constexpr double rb87_mass = rb87_mass_u * atomic_mass_unit;

}  // namespace spinsim::constants
