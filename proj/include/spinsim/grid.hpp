#pragma once

#include <cmath>
#include <vector>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/units.hpp"

namespace spinsim {

// Uniform periodic grid, symmetric about z = 0, with wavenumbers in standard
// FFT order (non-negative frequencies first, then negative).
struct Grid1D {
  int n_points = 0;
  double z_min = 0;
  double z_max = 0;
  double dz = 0;
  std::vector<double> z;  // z[i] = z_min + i*dz
  std::vector<double> k;  // k[j] = 2*pi*j/(n*dz) with signed index j
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline Grid1D make_grid(double z_extent, int n_points) {
  if (!(z_extent > 0)) throw ValidationError("grid extent must be positive");
  if (!is_power_of_two(n_points) || n_points < 16)
    throw ValidationError("n_points must be a power of two, at least 16");
  Grid1D g;
  g.n_points = n_points;
  g.z_min = -0.5 * z_extent;
  g.z_max = 0.5 * z_extent;
  g.dz = z_extent / n_points;
  g.z.resize(n_points);
  g.k.resize(n_points);
  const double dk = 2.0 * constants::pi / z_extent;
  for (int i = 0; i < n_points; ++i) g.z[i] = g.z_min + i * g.dz;
  for (int j = 0; j < n_points; ++j)
    g.k[j] = (j <= n_points / 2 - 1 ? j : j - n_points) * dk;
  return g;
}

// 1D Thomas-Fermi chemical potential (oscillator units, unit trap frequency)
// for a cloud of `atom_count` atoms with density coupling c0.
inline double thomas_fermi_mu(double c0, double atom_count) {
  if (!(c0 > 0) || !(atom_count > 0)) return 0.0;
  return std::pow(3.0 * atom_count * c0 / (4.0 * std::sqrt(2.0)), 2.0 / 3.0);
}

// Guarded construction: the box must contain the interacting cloud, estimated
// by the Thomas-Fermi radius, with some headroom for sloshing dynamics.
inline Grid1D make_grid(double z_extent, int n_points, const SimCouplings& c,
                        double atom_count) {
  Grid1D g = make_grid(z_extent, n_points);
  const double r_tf = std::sqrt(2.0 * thomas_fermi_mu(c.c0, atom_count));
  if (0.5 * z_extent < 1.2 * r_tf)
    throw ValidationError("grid extent too small for the Thomas-Fermi radius");
  return g;
}

}  // namespace spinsim
