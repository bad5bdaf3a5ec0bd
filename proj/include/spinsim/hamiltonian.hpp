#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "spinsim/state.hpp"
#include "spinsim/units.hpp"

namespace spinsim {

// External potential in oscillator units: harmonic trap plus an optional
// gaussian barrier at the origin. Identical for all three Zeeman components.
struct TrapSpec {
  double omega = 1.0;           // axial frequency (1 in oscillator units)
  double barrier_height = 0.0;  // A, units of hbar*omega_z
  double barrier_sigma = 1.0;   // units of a_z
  bool barrier_on = true;
};

inline void validate(const TrapSpec& t) {
  if (!(t.omega > 0)) throw ValidationError("trap omega must be positive");
  if (t.barrier_height < 0) throw ValidationError("barrier height must be >= 0");
  if (!(t.barrier_sigma > 0)) throw ValidationError("barrier sigma must be positive");
}

inline double v_ext(double z, const TrapSpec& t) {
  double v = 0.5 * t.omega * t.omega * z * z;
  if (t.barrier_on && t.barrier_height != 0)
    v += t.barrier_height * std::exp(-z * z / (t.barrier_sigma * t.barrier_sigma));
  return v;
}

inline std::vector<double> v_ext_table(const Grid1D& g, const TrapSpec& t) {
  std::vector<double> v(g.n_points);
  for (int i = 0; i < g.n_points; ++i) v[i] = v_ext(g.z[i], t);
  return v;
}

// Time derivative of the fields from all non-kinetic terms,
//   d psi_{+-1}/dt = -i [ (V + c0 n + c2 (n_{+-1} + n_0 - n_{-+1})) psi_{+-1}
//                         + c2 psi_0^2 conj(psi_{-+1}) ]
//   d psi_0/dt    = -i [ (V + c0 n + c2 (n_{+1} + n_{-1})) psi_0
//                         + 2 c2 psi_{+1} conj(psi_0) psi_{-1} ]
// with densities evaluated from the input fields. `phase_ref` subtracts a
// constant energy offset (a global-phase gauge; zero reproduces the equations
// verbatim).
inline void interaction_rhs(const std::array<Field, 3>& psi,
                            const std::vector<double>& v, const SimCouplings& c,
                            double phase_ref, std::array<Field, 3>& out) {
  const std::size_t n = v.size();
  for (auto& f : out) f.resize(n);
  const Complex* P = psi[kPlus].data();
  const Complex* Z = psi[kZero].data();
  const Complex* M = psi[kMinus].data();
  Complex* OP = out[kPlus].data();
  Complex* OZ = out[kZero].data();
  Complex* OM = out[kMinus].data();
  for (std::size_t i = 0; i < n; ++i) {
    const double pr = P[i].real(), px = P[i].imag();
    const double zr = Z[i].real(), zx = Z[i].imag();
    const double mr = M[i].real(), mx = M[i].imag();
    const double np = pr * pr + px * px;
    const double nz = zr * zr + zx * zx;
    const double nm = mr * mr + mx * mx;
    const double base = v[i] + c.c0 * (np + nz + nm) - phase_ref;
    const double dp = base + c.c2 * (np + nz - nm);
    const double d0 = base + c.c2 * (np + nm);
    const double dm = base + c.c2 * (nm + nz - np);
    // psi_0^2 and the exchange products
    const double z2r = zr * zr - zx * zx;
    const double z2x = 2.0 * zr * zx;
    const double epr = c.c2 * (z2r * mr + z2x * mx);  // c2 psi_0^2 conj(psi_-)
    const double epx = c.c2 * (z2x * mr - z2r * mx);
    const double emr = c.c2 * (z2r * pr + z2x * px);  // c2 psi_0^2 conj(psi_+)
    const double emx = c.c2 * (z2x * pr - z2r * px);
    const double tr = pr * mr - px * mx;  // psi_+ psi_-
    const double tx = pr * mx + px * mr;
    const double e0r = 2.0 * c.c2 * (tr * zr + tx * zx);  // 2 c2 psi_+ conj(psi_0) psi_-
    const double e0x = 2.0 * c.c2 * (tx * zr - tr * zx);
    // out = -i (d * psi + e)
    const double hpr = dp * pr + epr, hpx = dp * px + epx;
    const double h0r = d0 * zr + e0r, h0x = d0 * zx + e0x;
    const double hmr = dm * mr + emr, hmx = dm * mx + emx;
    OP[i] = Complex(hpx, -hpr);
    OZ[i] = Complex(h0x, -h0r);
    OM[i] = Complex(hmx, -hmr);
  }
}

inline std::array<Field, 3> interaction_rhs(const SpinorState& s,
                                            const TrapSpec& trap,
                                            const SimCouplings& c) {
  std::array<Field, 3> out;
  interaction_rhs(s.psi, v_ext_table(s.grid, trap), c, 0.0, out);
  return out;
}

}  // namespace spinsim
