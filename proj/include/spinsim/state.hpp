#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "spinsim/errors.hpp"
#include "spinsim/fft.hpp"
#include "spinsim/grid.hpp"

namespace spinsim {

// Zeeman component indices, m = +1, 0, -1.
enum Component : int { kPlus = 0, kZero = 1, kMinus = 2 };
inline constexpr std::array<int, 3> kComponents{kPlus, kZero, kMinus};

inline const char* component_label(int m) {
  return m == kPlus ? "+1" : (m == kZero ? "0" : "-1");
}

// Three complex fields on a shared grid at a common time (oscillator units).
struct SpinorState {
  Grid1D grid;
  std::array<Field, 3> psi;
  double t = 0;
};

inline SpinorState make_state(const Grid1D& grid) {
  SpinorState s;
  s.grid = grid;
  for (auto& f : s.psi) f.assign(grid.n_points, Complex(0.0, 0.0));
  return s;
}

// Quadrature on the periodic uniform grid; the plain Riemann sum coincides
// with the trapezoid rule here and is used for every integral in the library.
inline double integrate(const std::vector<double>& f, double dz) {
  double s = 0;
  for (double v : f) s += v;
  return s * dz;
}

inline double norm_sq(const Field& psi, double dz) {
  double s = 0;
  for (const Complex& c : psi) s += c.real() * c.real() + c.imag() * c.imag();
  return s * dz;
}

inline double component_atoms(const SpinorState& s, int m) {
  return norm_sq(s.psi[m], s.grid.dz);
}

inline double total_atoms(const SpinorState& s) {
  return component_atoms(s, kPlus) + component_atoms(s, kZero) +
         component_atoms(s, kMinus);
}

inline double max_density(const SpinorState& s) {
  double m = 0;
  for (const auto& f : s.psi)
    for (const Complex& c : f) m = std::max(m, std::norm(c));
  return m;
}

// Target relative populations lambda[m][well]; wells are left (z < 0) and
// right (z > 0).
struct WellPopulationSpec {
  static constexpr int kLeft = 0;
  static constexpr int kRight = 1;
  std::array<std::array<double, 2>, 3> lambda{};

  double total(int m) const { return lambda[m][kLeft] + lambda[m][kRight]; }
  double magnetization() const { return total(kPlus) - total(kMinus); }
};

inline void validate(const WellPopulationSpec& spec) {
  double sum = 0;
  for (int m : kComponents)
    for (int j : {0, 1}) {
      if (spec.lambda[m][j] < 0)
        throw ValidationError("population fractions must be non-negative");
      sum += spec.lambda[m][j];
    }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("population fractions must sum to 1");
}

inline bool is_well_symmetric(const WellPopulationSpec& spec) {
  for (int m : kComponents)
    if (spec.lambda[m][0] != spec.lambda[m][1]) return false;
  return true;
}

}  // namespace spinsim
