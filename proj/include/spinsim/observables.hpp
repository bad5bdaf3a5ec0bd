#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "spinsim/hamiltonian.hpp"
#include "spinsim/spectral.hpp"
#include "spinsim/state.hpp"

namespace spinsim {

// Everything measured during a run, at one instant. Times, lengths and
// energies are in oscillator units; populations are fractions of the total
// atom number.
struct ObservableRecord {
  double t = 0;
  std::array<double, 3> atoms{};        // N_m
  std::array<double, 3> lambda{};       // N_m / N
  std::array<double, 3> lambda_left{};  // N_m(z<0) / N
  double magnetization = 0;             // lambda_+1 - lambda_-1
  double com_z = 0;                     // total-density center of mass
  double energy = 0;                    // total energy per atom, hbar*omega_z
};

inline std::array<double, 3> populations(const SpinorState& s) {
  const double n = total_atoms(s);
  return {component_atoms(s, kPlus) / n, component_atoms(s, kZero) / n,
          component_atoms(s, kMinus) / n};
}

// Integral of |psi_m|^2 over the left half of the box divided by the total
// atom number. The two mirror fixed points of the periodic grid (z = 0 and
// z = z_min, whose image +z_max is not a sample) carry half weight on each
// side, so even states split exactly in half.
inline double left_fraction(const SpinorState& s, int m) {
  const Grid1D& g = s.grid;
  const Field& f = s.psi[m];
  const int n = g.n_points;
  double acc = 0.5 * std::norm(f[0]);
  for (int i = 1; i < n / 2; ++i) acc += std::norm(f[i]);
  acc += 0.5 * std::norm(f[n / 2]);
  return acc * g.dz / total_atoms(s);
}

inline std::array<double, 3> left_fractions(const SpinorState& s) {
  return {left_fraction(s, kPlus), left_fraction(s, kZero),
          left_fraction(s, kMinus)};
}

// int_{-delta}^{+delta} (n_{-1} + n_{+1}) dz; samples exactly at |z| = delta
// carry half weight.
inline double overlap_integral(const SpinorState& s, double delta) {
  if (delta < 0) throw ValidationError("overlap delta must be >= 0");
  if (delta > 0.5 * (s.grid.z_max - s.grid.z_min))
    throw ValidationError("overlap delta exceeds grid half extent");
  double acc = 0;
  for (int i = 0; i < s.grid.n_points; ++i) {
    const double az = std::abs(s.grid.z[i]);
    if (az > delta) continue;
    const double w = (az == delta) ? 0.5 : 1.0;
    acc += w * (std::norm(s.psi[kPlus][i]) + std::norm(s.psi[kMinus][i]));
  }
  return acc * s.grid.dz;
}

inline double center_of_mass(const SpinorState& s) {
  double zn = 0, n = 0;
  for (int i = 0; i < s.grid.n_points; ++i) {
    const double d = std::norm(s.psi[kPlus][i]) + std::norm(s.psi[kZero][i]) +
                     std::norm(s.psi[kMinus][i]);
    zn += s.grid.z[i] * d;
    n += d;
  }
  return n > 0 ? zn / n : 0.0;
}

// Position below which half of the component's atoms sit (linear
// interpolation of the cumulative density).
inline double median_position(const SpinorState& s, int m) {
  const double target = 0.5 * component_atoms(s, m) / s.grid.dz;
  double acc = 0;
  for (int i = 0; i < s.grid.n_points; ++i) {
    const double d = std::norm(s.psi[m][i]);
    if (acc + d >= target && d > 0) {
      const double frac = (target - acc) / d;
      return s.grid.z[i] + (frac - 0.5) * s.grid.dz;
    }
    acc += d;
  }
  return s.grid.z_max;
}

// Per-component atom numbers histogrammed into bins of fixed width, one bin
// centered at z = 0.
struct DensityProfile {
  double bin_width = 0;
  std::vector<double> bin_centers;
  std::array<std::vector<double>, 3> counts;
};

inline DensityProfile binned_density(const SpinorState& s, double bin_width) {
  if (!(bin_width >= s.grid.dz))
    throw ValidationError("bin width must be at least the grid spacing");
  const int b_min = static_cast<int>(std::lround(s.grid.z.front() / bin_width));
  const int b_max = static_cast<int>(std::lround(s.grid.z.back() / bin_width));
  const int nb = b_max - b_min + 1;
  DensityProfile p;
  p.bin_width = bin_width;
  p.bin_centers.resize(nb);
  for (int b = 0; b < nb; ++b) p.bin_centers[b] = (b_min + b) * bin_width;
  for (auto& c : p.counts) c.assign(nb, 0.0);
  for (int i = 0; i < s.grid.n_points; ++i) {
    const int b = static_cast<int>(std::lround(s.grid.z[i] / bin_width)) - b_min;
    for (int m : kComponents) p.counts[m][b] += std::norm(s.psi[m][i]) * s.grid.dz;
  }
  return p;
}

// Total energy per the functional generating the equations of motion:
// kinetic + external potential + (c0/2) n^2 + (c2/2) |F|^2, where
// |F|^2 = (n_+ - n_-)^2 + 2 n_0 (n_+ + n_-) + 4 Re[psi_+* psi_0^2 psi_-*].
// Returned per atom, in hbar*omega_z.
inline double total_energy(const SpinorState& s, const TrapSpec& trap,
                           const SimCouplings& c, const FftPlan& plan,
                           Field& scratch) {
  double e = kinetic_energy(s, plan, scratch);
  double acc = 0;
  for (int i = 0; i < s.grid.n_points; ++i) {
    const Complex p = s.psi[kPlus][i], z0 = s.psi[kZero][i], m = s.psi[kMinus][i];
    const double np = std::norm(p), nz = std::norm(z0), nm = std::norm(m);
    const double n = np + nz + nm;
    const Complex z2 = z0 * z0;
    const double exch = 4.0 * (std::conj(p) * z2 * std::conj(m)).real();
    acc += v_ext(s.grid.z[i], trap) * n + 0.5 * c.c0 * n * n +
           0.5 * c.c2 * ((np - nm) * (np - nm) + 2.0 * nz * (np + nm) + exch);
  }
  e += acc * s.grid.dz;
  return e / total_atoms(s);
}

inline double total_energy(const SpinorState& s, const TrapSpec& trap,
                           const SimCouplings& c) {
  FftPlan plan(s.grid.n_points);
  Field scratch;
  return total_energy(s, trap, c, plan, scratch);
}

inline ObservableRecord make_record(const SpinorState& s, const TrapSpec& trap,
                                    const SimCouplings& c, const FftPlan& plan,
                                    Field& scratch) {
  ObservableRecord r;
  r.t = s.t;
  for (int m : kComponents) r.atoms[m] = component_atoms(s, m);
  const double n = r.atoms[0] + r.atoms[1] + r.atoms[2];
  for (int m : kComponents) r.lambda[m] = r.atoms[m] / n;
  r.lambda_left = left_fractions(s);
  r.magnetization = r.lambda[kPlus] - r.lambda[kMinus];
  r.com_z = center_of_mass(s);
  r.energy = total_energy(s, trap, c, plan, scratch);
  return r;
}

// Frequency of the largest non-DC spectral peak of the mean-subtracted,
// Hann-windowed, zero-padded series, refined by quadratic interpolation of
// the log magnitude. Returns cycles per unit of sample_dt.
inline double dominant_frequency(const std::vector<double>& series,
                                 double sample_dt) {
  const std::size_t n = series.size();
  if (n < 32) throw ValidationError("series too short for frequency analysis");
  if (!(sample_dt > 0)) throw ValidationError("sample_dt must be positive");
  double mean = 0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  std::size_t m = 1;
  while (m < n) m <<= 1;
  m <<= 3;  // 8x zero padding for peak interpolation
  Field buf(m, Complex(0, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const double w =
        0.5 * (1.0 - std::cos(2.0 * constants::pi * i / (n - 1)));
    buf[i] = Complex((series[i] - mean) * w, 0.0);
  }
  FftPlan plan(static_cast<int>(m));
  plan.forward(buf);

  const double duration = static_cast<double>(n) * sample_dt;
  // Skip what is left of the DC lobe after mean subtraction.
  const std::size_t b_lo =
      static_cast<std::size_t>(std::ceil(1.5 * static_cast<double>(m) / n));
  std::size_t peak = 0;
  double peak_mag = -1;
  for (std::size_t b = b_lo; b <= m / 2; ++b) {
    const double mag = std::abs(buf[b]);
    if (mag > peak_mag) {
      peak_mag = mag;
      peak = b;
    }
  }
  if (peak == 0 || peak_mag <= 0)
    throw ValidationError("no spectral peak found in series");
  double shift = 0;
  if (peak > b_lo && peak < m / 2) {
    const double la = std::log(std::abs(buf[peak - 1]) + 1e-300);
    const double lb = std::log(peak_mag + 1e-300);
    const double lc = std::log(std::abs(buf[peak + 1]) + 1e-300);
    const double den = la - 2.0 * lb + lc;
    if (den < 0) shift = 0.5 * (la - lc) / den;
  }
  const double freq =
      (static_cast<double>(peak) + shift) / (static_cast<double>(m) * sample_dt);
  if (duration * freq < 4.0)
    throw ValidationError("series shorter than 4 periods of the dominant peak");
  return freq;
}

// Least-squares fit of y(t) ~ offset + a cos(omega t) + b sin(omega t) at
// fixed omega; rel_residual is ||y - fit|| / ||oscillatory part of fit||.
struct CosineFit {
  double offset = 0;
  double amplitude = 0;
  double phase = 0;
  double rel_residual = 0;
};

inline CosineFit fit_cosine(const std::vector<double>& t,
                            const std::vector<double>& y, double omega) {
  if (t.size() != y.size() || t.size() < 8)
    throw ValidationError("fit_cosine needs matching series of length >= 8");
  const std::size_t n = t.size();
  // Normal equations for the basis {1, cos, sin}.
  double s[3][3] = {{0}}, rhs[3] = {0};
  for (std::size_t i = 0; i < n; ++i) {
    const double b[3] = {1.0, std::cos(omega * t[i]), std::sin(omega * t[i])};
    for (int r = 0; r < 3; ++r) {
      for (int cc = 0; cc < 3; ++cc) s[r][cc] += b[r] * b[cc];
      rhs[r] += b[r] * y[i];
    }
  }
  // Solve the 3x3 system by Gaussian elimination with partial pivoting.
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(s[idx[r]][col]) > std::abs(s[idx[piv]][col])) piv = r;
    std::swap(idx[col], idx[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = s[idx[r]][col] / s[idx[col]][col];
      for (int cc = col; cc < 3; ++cc) s[idx[r]][cc] -= f * s[idx[col]][cc];
      rhs[idx[r]] -= f * rhs[idx[col]];
    }
  }
  double sol[3];
  for (int r = 2; r >= 0; --r) {
    double v = rhs[idx[r]];
    for (int cc = r + 1; cc < 3; ++cc) v -= s[idx[r]][cc] * sol[cc];
    sol[r] = v / s[idx[r]][r];
  }
  CosineFit fit;
  fit.offset = sol[0];
  fit.amplitude = std::hypot(sol[1], sol[2]);
  fit.phase = std::atan2(-sol[2], sol[1]);
  double res = 0, sig = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = sol[0] + sol[1] * std::cos(omega * t[i]) +
                     sol[2] * std::sin(omega * t[i]);
    res += (y[i] - f) * (y[i] - f);
    const double osc = f - sol[0];
    sig += osc * osc;
  }
  fit.rel_residual = sig > 0 ? std::sqrt(res / sig) : std::sqrt(res);
  return fit;
}

}  // namespace spinsim
