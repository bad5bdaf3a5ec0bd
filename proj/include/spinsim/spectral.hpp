#pragma once

#include <vector>

#include "spinsim/fft.hpp"
#include "spinsim/hamiltonian.hpp"
#include "spinsim/state.hpp"

namespace spinsim {

// Diagonal k-space factors exp(-i k^2 dt / 4), i.e. the exact propagator of
// the kinetic term over half a step dt/2 (hbar = M = 1).
inline std::vector<Complex> kinetic_half_step_table(const Grid1D& g, double dt) {
  std::vector<Complex> ph(g.n_points);
  for (int j = 0; j < g.n_points; ++j) {
    const double ang = -g.k[j] * g.k[j] * dt * 0.25;
    ph[j] = Complex(std::cos(ang), std::sin(ang));
  }
  return ph;
}

inline void apply_kspace_factor(Field& f, const std::vector<Complex>& factor,
                                const FftPlan& plan) {
  plan.forward(f);
  const std::size_t n = f.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double fr = f[j].real(), fx = f[j].imag();
    const double wr = factor[j].real(), wx = factor[j].imag();
    f[j] = Complex(fr * wr - fx * wx, fr * wx + fx * wr);
  }
  plan.inverse(f);
}

inline void kinetic_half_step(SpinorState& s, const std::vector<Complex>& table,
                              const FftPlan& plan) {
  for (auto& f : s.psi) apply_kspace_factor(f, table, plan);
}

// Convenience form matching the operation contract; reuses nothing, so the
// evolution loop precomputes the table and plan instead of calling this.
inline SpinorState kinetic_half_step(SpinorState s, double dt) {
  FftPlan plan(s.grid.n_points);
  kinetic_half_step(s, kinetic_half_step_table(s.grid, dt), plan);
  return s;
}

// Kinetic energy (1/2) int |d psi/dz|^2 dz summed over components, evaluated
// in k-space (discrete Parseval with the unitary transform).
inline double kinetic_energy(const SpinorState& s, const FftPlan& plan,
                             Field& scratch) {
  double e = 0;
  for (const auto& f : s.psi) {
    scratch = f;
    plan.forward(scratch);
    for (int j = 0; j < s.grid.n_points; ++j)
      e += 0.5 * s.grid.k[j] * s.grid.k[j] * std::norm(scratch[j]);
  }
  return e * s.grid.dz;
}

inline double kinetic_energy(const SpinorState& s) {
  FftPlan plan(s.grid.n_points);
  Field scratch;
  return kinetic_energy(s, plan, scratch);
}

// Spectral second derivative, used by the relaxation residual.
inline Field second_derivative(const Field& f, const Grid1D& g,
                               const FftPlan& plan) {
  Field d = f;
  plan.forward(d);
  for (int j = 0; j < g.n_points; ++j) d[j] *= -g.k[j] * g.k[j];
  plan.inverse(d);
  return d;
}

}  // namespace spinsim
