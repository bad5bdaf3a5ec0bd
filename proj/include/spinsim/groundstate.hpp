#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "spinsim/spectral.hpp"
#include "spinsim/state.hpp"

namespace spinsim {

struct RelaxationReport {
  double final_energy = 0;            // total energy, hbar*omega_z
  double energy_delta_last_step = 0;  // signed, hbar*omega_z
  long iterations = 0;
  double residual = 0;  // ||(H - mu) psi|| / (|mu| ||psi||)
};

class RelaxationError : public std::runtime_error {
 public:
  RelaxationError(const std::string& msg, RelaxationReport r)
      : std::runtime_error(msg), report(r) {}
  RelaxationReport report;
};

struct RelaxationOptions {
  double energy_tol = 1e-12;  // relative energy change per accepted step
  double residual_tol = 1e-8;
  long max_iterations = 200000;
  double initial_tau = 0;  // 0 picks a stability-limited value
  // Called once per accepted iteration with the energy after renormalization.
  std::function<void(long, double)> monitor;
};

namespace detail {

// Workspace for the scalar relaxation: energy, chemical potential and
// residual of the real field stored in `w`.
struct ScalarRelaxer {
  const Grid1D& grid;
  const std::vector<double>& v;
  double c0;
  double atom_count;
  FftPlan plan;
  Field scratch;

  ScalarRelaxer(const Grid1D& g, const std::vector<double>& v_in, double c0_in,
                double n_in)
      : grid(g), v(v_in), c0(c0_in), atom_count(n_in), plan(g.n_points) {}

  void renormalize(Field& w) const {
    const double s = std::sqrt(atom_count / norm_sq(w, grid.dz));
    for (Complex& x : w) x = Complex(std::abs(x.real()) * s, 0.0);
  }

  double energy(const Field& w, double* mu, double* n_peak) {
    scratch = w;
    plan.forward(scratch);
    double ek = 0;
    for (int j = 0; j < grid.n_points; ++j)
      ek += 0.5 * grid.k[j] * grid.k[j] * std::norm(scratch[j]);
    ek *= grid.dz;
    double ev = 0, ei2 = 0, peak = 0, nn = 0;
    for (int i = 0; i < grid.n_points; ++i) {
      const double d = std::norm(w[i]);
      ev += v[i] * d;
      ei2 += d * d;
      peak = std::max(peak, d);
      nn += d;
    }
    ev *= grid.dz;
    ei2 *= grid.dz;
    nn *= grid.dz;
    if (mu) *mu = (ek + ev + c0 * ei2) / nn;
    if (n_peak) *n_peak = peak;
    return ek + ev + 0.5 * c0 * ei2;
  }

  // (H - mu) w for the current density; also returns the residual norm ratio.
  double residual(const Field& w, double mu, Field* r_out) {
    const Field d2 = second_derivative(w, grid, plan);
    double rnorm = 0, fnorm = 0;
    if (r_out) r_out->resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
      const double hw = -0.5 * d2[i].real() +
                        (v[i] + c0 * std::norm(w[i])) * w[i].real();
      const double r = hw - mu * w[i].real();
      if (r_out) (*r_out)[i] = Complex(r, 0.0);
      rnorm += r * r;
      fnorm += std::norm(w[i]);
    }
    return std::sqrt(rnorm / fnorm) / std::abs(mu);
  }
};

}  // namespace detail

// Ground state of the scalar Hamiltonian -1/2 d^2/dz^2 + V + c0 n, normalized
// to `atom_count`. Two phases of energy-minimizing gradient flow:
//   1. imaginary-time propagation with the split-step machinery (dt -> -i tau,
//      renormalizing each step; tau halves whenever the energy rises),
//   2. once the split flow saturates, a preconditioned residual descent on
//      the same energy functional pushes |(H-mu)psi| down to the requested
//      tolerance (the split fixed point alone is biased at O(tau^2)).
// Energy is non-increasing across accepted iterations in both phases.
inline std::pair<std::vector<double>, RelaxationReport> scalar_ground_state(
    const Grid1D& grid, const TrapSpec& trap, const SimCouplings& c,
    double atom_count, const RelaxationOptions& opt = {}) {
  validate(trap);
  if (!(atom_count > 0)) throw ValidationError("atom_count must be positive");
  const std::vector<double> v = v_ext_table(grid, trap);
  const int n = grid.n_points;
  detail::ScalarRelaxer rx(grid, v, c.c0, atom_count);

  // Thomas-Fermi initial guess when interactions dominate, gaussian otherwise.
  Field w(n);
  const double mu_tf = thomas_fermi_mu(c.c0, atom_count);
  if (mu_tf > 2.0) {
    for (int i = 0; i < n; ++i)
      w[i] = Complex(std::sqrt(std::max(mu_tf - v[i], 0.0) / c.c0), 0.0);
  } else {
    for (int i = 0; i < n; ++i)
      w[i] = Complex(std::exp(-0.5 * trap.omega * grid.z[i] * grid.z[i]), 0.0);
  }
  rx.renormalize(w);

  double mu = 0, n_peak = 0;
  double energy = rx.energy(w, &mu, &n_peak);
  double v_max = 0;
  for (double x : v) v_max = std::max(v_max, x);
  const auto tau_limit = [&]() {
    return 2.5 / std::max(v_max + c.c0 * n_peak - mu, 1.0);
  };

  RelaxationReport report;
  long accepted = 0;
  bool converged = false;
  Field backup(n), y0(n), stage(n), slope(n), acc(n);

  // ---- phase 1: split-step imaginary time -------------------------------
  double tau = opt.initial_tau > 0 ? opt.initial_tau : 0.5 * tau_limit();
  double tau_ceiling = tau;
  const double tau_min = 1e-7;
  std::vector<Complex> half_table(n);
  double table_tau = -1;
  const auto rhs = [&](const Field& f, Field& out, double shift) {
    for (int i = 0; i < n; ++i) {
      const double d = std::norm(f[i]);
      const double r = v[i] + c.c0 * d - shift;
      out[i] = Complex(-r * f[i].real(), -r * f[i].imag());
    }
  };

  double last_rel_de = 1.0;
  double plateau_residual = -1.0;
  while (accepted < opt.max_iterations) {
    if (tau != table_tau) {
      for (int j = 0; j < n; ++j)
        half_table[j] =
            Complex(std::exp(-grid.k[j] * grid.k[j] * tau * 0.25), 0.0);
      table_tau = tau;
    }
    backup = w;
    const double e_prev = energy;
    apply_kspace_factor(w, half_table, rx.plan);
    y0 = w;
    rhs(y0, slope, mu);
    for (int i = 0; i < n; ++i) {
      acc[i] = y0[i] + (tau / 6.0) * slope[i];
      stage[i] = y0[i] + (tau / 2.0) * slope[i];
    }
    rhs(stage, slope, mu);
    for (int i = 0; i < n; ++i) {
      acc[i] += (tau / 3.0) * slope[i];
      stage[i] = y0[i] + (tau / 2.0) * slope[i];
    }
    rhs(stage, slope, mu);
    for (int i = 0; i < n; ++i) {
      acc[i] += (tau / 3.0) * slope[i];
      stage[i] = y0[i] + tau * slope[i];
    }
    rhs(stage, slope, mu);
    for (int i = 0; i < n; ++i) w[i] = acc[i] + (tau / 6.0) * slope[i];
    apply_kspace_factor(w, half_table, rx.plan);
    rx.renormalize(w);
    energy = rx.energy(w, &mu, &n_peak);

    if (energy > e_prev + 1e-13 * std::abs(e_prev)) {
      w = backup;
      energy = rx.energy(w, &mu, &n_peak);
      tau *= 0.5;
      tau_ceiling = std::min(tau_ceiling, tau);
      if (tau < tau_min) break;
      continue;
    }

    ++accepted;
    report.energy_delta_last_step = energy - e_prev;
    last_rel_de = (e_prev - energy) / std::max(std::abs(energy), 1e-300);
    if (opt.monitor) opt.monitor(accepted, energy);
    tau = std::min({tau * 1.02, tau_ceiling, 0.5 * tau_limit()});

    if (accepted % 32 == 0 || last_rel_de < opt.energy_tol) {
      report.residual = rx.residual(w, mu, nullptr);
      if (report.residual <= opt.residual_tol &&
          last_rel_de < opt.energy_tol) {
        converged = true;
        break;
      }
      // Saturation at this step size: the fixed-point bias dominates. Hand
      // over to the residual descent below.
      if (plateau_residual > 0 && report.residual > 0.7 * plateau_residual)
        break;
      plateau_residual = report.residual;
    }
  }

  // ---- phase 2: preconditioned residual descent --------------------------
  if (!converged) {
    Field resid(n), delta(n);
    double alpha = 1.0;
    while (accepted < opt.max_iterations) {
      report.residual = rx.residual(w, mu, &resid);
      if (report.residual <= opt.residual_tol &&
          last_rel_de < opt.energy_tol) {
        converged = true;
        break;
      }
      delta = resid;
      rx.plan.forward(delta);
      for (int j = 0; j < n; ++j)
        delta[j] /= 0.5 * grid.k[j] * grid.k[j] + std::max(mu, 1.0);
      rx.plan.inverse(delta);
      backup = w;
      const double e_prev = energy;
      for (int i = 0; i < n; ++i)
        w[i] = Complex(w[i].real() - alpha * delta[i].real(), 0.0);
      rx.renormalize(w);
      energy = rx.energy(w, &mu, &n_peak);
      if (energy > e_prev + 1e-14 * std::abs(e_prev)) {
        w = backup;
        energy = rx.energy(w, &mu, &n_peak);
        alpha *= 0.5;
        if (alpha < 1e-6) break;
        continue;
      }
      ++accepted;
      report.energy_delta_last_step = energy - e_prev;
      last_rel_de = (e_prev - energy) / std::max(std::abs(energy), 1e-300);
      if (opt.monitor) opt.monitor(accepted, energy);
      alpha = std::min(alpha * 1.05, 1.0);
    }
  }

  report.final_energy = energy;
  report.iterations = accepted;
  if (!converged) {
    report.residual = rx.residual(w, mu, nullptr);
    converged =
        report.residual <= opt.residual_tol && last_rel_de < opt.energy_tol;
  }
  if (!converged)
    throw RelaxationError("ground-state relaxation did not converge", report);

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::abs(w[i].real());
  return {out, report};
}

inline std::pair<std::vector<double>, RelaxationReport> scalar_ground_state(
    const Grid1D& grid, const TrapSpec& trap, const SimCouplings& c,
    double atom_count, double residual_tol) {
  RelaxationOptions opt;
  opt.residual_tol = residual_tol;
  return scalar_ground_state(grid, trap, c, atom_count, opt);
}

// Circular translation by an integer number of cells (exact on the torus).
inline void translate(SpinorState& s, int cells) {
  const int n = s.grid.n_points;
  int shift = ((cells % n) + n) % n;
  if (shift == 0) return;
  Field tmp(n);
  for (auto& f : s.psi) {
    for (int i = 0; i < n; ++i) tmp[(i + shift) % n] = f[i];
    f = tmp;
  }
}

// Populate the three Zeeman components from the relaxed scalar field: inside
// each well the scalar profile is rescaled to carry N * lambda[m][well]
// atoms. Fields come out real and non-negative (zero relative phases). The
// two mirror fixed points of the grid take the RMS of the two well scalings,
// matching the half-weight quadrature convention. For well-asymmetric
// targets the scalar field must be negligible within +-separation_delta of
// the origin.
inline SpinorState split_populations(const std::vector<double>& scalar,
                                     const WellPopulationSpec& spec,
                                     const Grid1D& grid,
                                     double separation_delta = -1.0) {
  validate(spec);
  const int n = grid.n_points;
  if (static_cast<int>(scalar.size()) != n)
    throw ValidationError("scalar field length does not match grid");
  double w_left = 0.5 * scalar[0] * scalar[0] + 0.5 * scalar[n / 2] * scalar[n / 2];
  double w_right = w_left;
  for (int i = 1; i < n / 2; ++i) w_left += scalar[i] * scalar[i];
  for (int i = n / 2 + 1; i < n; ++i) w_right += scalar[i] * scalar[i];
  w_left *= grid.dz;
  w_right *= grid.dz;
  const double total = w_left + w_right;

  if (separation_delta < 0) separation_delta = 2.0 * grid.dz;
  bool symmetric = true;
  for (int m : kComponents)
    symmetric = symmetric && spec.lambda[m][0] == spec.lambda[m][1];
  if (!symmetric) {
    double center = 0;
    for (int i = 0; i < n; ++i)
      if (std::abs(grid.z[i]) <= separation_delta)
        center += scalar[i] * scalar[i];
    center *= grid.dz;
    if (center > 1e-6 * total)
      throw ValidationError(
          "scalar field is not separated at z = 0; a well-asymmetric "
          "population split is ill-defined");
  }

  SpinorState s = make_state(grid);
  for (int m : kComponents) {
    const double want_l = total * spec.lambda[m][0];
    const double want_r = total * spec.lambda[m][1];
    if ((want_l > 0 && w_left <= 0) || (want_r > 0 && w_right <= 0))
      throw ValidationError("requested population in an empty well");
    const double s_l = w_left > 0 ? std::sqrt(want_l / w_left) : 0.0;
    const double s_r = w_right > 0 ? std::sqrt(want_r / w_right) : 0.0;
    const double s_mid = std::sqrt(0.5 * (s_l * s_l + s_r * s_r));
    Field& f = s.psi[m];
    f[0] = Complex(s_mid * scalar[0], 0.0);
    f[n / 2] = Complex(s_mid * scalar[n / 2], 0.0);
    for (int i = 1; i < n / 2; ++i) f[i] = Complex(s_l * scalar[i], 0.0);
    for (int i = n / 2 + 1; i < n; ++i) f[i] = Complex(s_r * scalar[i], 0.0);
  }
  s.t = 0;
  return s;
}

}  // namespace spinsim
