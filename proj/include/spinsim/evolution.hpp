#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "spinsim/observables.hpp"
#include "spinsim/spectral.hpp"

namespace spinsim {

struct StepperConfig {
  double dt = 0;              // oscillator units; sign gives the direction
  double t_end = 0;           // integrate until state.t reaches this
  long observer_stride = 1;   // steps between observable records
  double barrier_quench_time = 0;  // barrier stays on until this time
  double barrier_ramp_time = 0;    // linear ramp-down duration after the quench
  // Constant energy offset subtracted inside the nonlinear step (a global
  // phase gauge). Unset means: evolve() picks it from the initial state,
  // step() uses zero.
  std::optional<double> phase_reference;
  double blowup_density_factor = 1e3;
};

inline void validate(const StepperConfig& c) {
  if (c.dt == 0) throw ValidationError("dt must be nonzero");
  if (c.observer_stride < 1) throw ValidationError("observer_stride must be >= 1");
  if (c.barrier_quench_time < 0 || c.barrier_ramp_time < 0)
    throw ValidationError("quench/ramp times must be >= 0");
}

// Density-weighted mean of the scalar potential energy (V + c0 n), a good
// constant gauge for keeping the nonlinear phase rotation per step small.
inline double default_phase_reference(const SpinorState& s, const TrapSpec& trap,
                                      const SimCouplings& c) {
  double num = 0, den = 0;
  for (int i = 0; i < s.grid.n_points; ++i) {
    const double n = std::norm(s.psi[kPlus][i]) + std::norm(s.psi[kZero][i]) +
                     std::norm(s.psi[kMinus][i]);
    num += (v_ext(s.grid.z[i], trap) + c.c0 * n) * n;
    den += n;
  }
  return den > 0 ? num / den : 0.0;
}

// One Strang step: exact kinetic half step in k-space, classical RK4 over all
// remaining terms with self-consistent densities at each substage, kinetic
// half step. A stepper owns its transform plan and scratch buffers and must
// not be shared between concurrently advancing pipelines.
class Stepper {
 public:
  Stepper(const Grid1D& grid, const TrapSpec& trap, const SimCouplings& c,
          const StepperConfig& cfg)
      : grid_(grid),
        couplings_(c),
        cfg_(cfg),
        plan_(grid.n_points),
        half_table_(kinetic_half_step_table(grid, cfg.dt)),
        phase_ref_(cfg.phase_reference.value_or(0.0)) {
    validate(cfg);
    validate(trap);
    full_table_.resize(half_table_.size());
    for (std::size_t j = 0; j < half_table_.size(); ++j)
      full_table_[j] = half_table_[j] * half_table_[j];
    TrapSpec on = trap, off = trap;
    on.barrier_on = true;
    off.barrier_on = false;
    v_on_ = v_ext_table(grid, on);
    v_off_ = v_ext_table(grid, off);
    barrier_configured_ = trap.barrier_on;
    v_work_.resize(grid.n_points);
    for (auto& f : y0_) f.resize(grid.n_points);
    for (auto& f : stage_) f.resize(grid.n_points);
    for (auto& f : slope_) f.resize(grid.n_points);
    for (auto& f : acc_) f.resize(grid.n_points);
  }

  double phase_reference() const { return phase_ref_; }

  // Density threshold for blowup detection; call before the first step.
  void set_reference_density(double peak) {
    blowup_threshold_ = peak > 0 ? cfg_.blowup_density_factor * peak : 0.0;
  }

  void advance(SpinorState& s) { advance_block(s, 1); }

  // n steps with the interior kinetic half steps fused pairwise (exact
  // composition in k-space). Only the block boundaries see physical states.
  void advance_block(SpinorState& s, long n_steps) {
    if (n_steps <= 0) return;
    if (time_dependent_inside(s.t, n_steps)) {
      for (long i = 0; i < n_steps; ++i) advance_plain(s);
      return;
    }
    const double t0 = s.t;
    const std::vector<double>& v = barrier_weight(t0) > 0 ? v_on_ : v_off_;
    kinetic_half_step(s, half_table_, plan_);
    for (long i = 0; i < n_steps; ++i) {
      rk4(s, v);
      check_blowup(s, t0 + (i + 1) * cfg_.dt);
      if (i + 1 < n_steps) kinetic_half_step(s, full_table_, plan_);
    }
    kinetic_half_step(s, half_table_, plan_);
    s.t = t0 + n_steps * cfg_.dt;
    ++blocks_;
  }

 private:
  bool time_dependent_inside(double t0, long n_steps) const {
    if (!barrier_configured_) return false;
    const double t1 = t0 + n_steps * cfg_.dt;
    const double q0 = cfg_.barrier_quench_time;
    const double q1 = q0 + cfg_.barrier_ramp_time;
    const double lo = std::min(t0, t1), hi = std::max(t0, t1);
    return lo < q1 && hi > q0;
  }

  // Barrier amplitude factor at time t: 1 before the quench, linear ramp to 0.
  double barrier_weight(double t) const {
    if (!barrier_configured_) return 0.0;
    if (t < cfg_.barrier_quench_time) return 1.0;
    if (cfg_.barrier_ramp_time <= 0) return 0.0;
    const double w =
        1.0 - (t - cfg_.barrier_quench_time) / cfg_.barrier_ramp_time;
    return std::clamp(w, 0.0, 1.0);
  }

  const std::vector<double>& v_at(double t) {
    const double w = barrier_weight(t);
    if (w <= 0) return v_off_;
    if (w >= 1) return v_on_;
    for (int i = 0; i < grid_.n_points; ++i)
      v_work_[i] = v_off_[i] + w * (v_on_[i] - v_off_[i]);
    return v_work_;
  }

  void advance_plain(SpinorState& s) {
    const double t0 = s.t;
    kinetic_half_step(s, half_table_, plan_);
    rk4_timed(s, t0);
    kinetic_half_step(s, half_table_, plan_);
    s.t = t0 + cfg_.dt;
    check_blowup(s, s.t);
  }

  void rk4_timed(SpinorState& s, double t0) {
    // Substage potentials at t0, t0 + dt/2, t0 + dt for a ramping barrier.
    const double dt = cfg_.dt;
    y0_ = s.psi;
    interaction_rhs(y0_, v_at(t0), couplings_, phase_ref_, slope_);
    combine(y0_, slope_, dt / 6.0, acc_);
    combine(y0_, slope_, dt / 2.0, stage_);
    interaction_rhs(stage_, v_at(t0 + 0.5 * dt), couplings_, phase_ref_, slope_);
    add_scaled(acc_, slope_, dt / 3.0);
    combine(y0_, slope_, dt / 2.0, stage_);
    interaction_rhs(stage_, v_at(t0 + 0.5 * dt), couplings_, phase_ref_, slope_);
    add_scaled(acc_, slope_, dt / 3.0);
    combine(y0_, slope_, dt, stage_);
    interaction_rhs(stage_, v_at(t0 + dt), couplings_, phase_ref_, slope_);
    add_scaled(acc_, slope_, dt / 6.0);
    s.psi = acc_;
  }

  void rk4(SpinorState& s, const std::vector<double>& v) {
    const double dt = cfg_.dt;
    y0_ = s.psi;
    interaction_rhs(y0_, v, couplings_, phase_ref_, slope_);
    combine(y0_, slope_, dt / 6.0, acc_);
    combine(y0_, slope_, dt / 2.0, stage_);
    interaction_rhs(stage_, v, couplings_, phase_ref_, slope_);
    add_scaled(acc_, slope_, dt / 3.0);
    combine(y0_, slope_, dt / 2.0, stage_);
    interaction_rhs(stage_, v, couplings_, phase_ref_, slope_);
    add_scaled(acc_, slope_, dt / 3.0);
    combine(y0_, slope_, dt, stage_);
    interaction_rhs(stage_, v, couplings_, phase_ref_, slope_);
    add_scaled(acc_, slope_, dt / 6.0);
    s.psi = acc_;
  }

  static void combine(const std::array<Field, 3>& base,
                      const std::array<Field, 3>& slope, double w,
                      std::array<Field, 3>& out) {
    for (int m : kComponents) {
      const Complex* b = base[m].data();
      const Complex* k = slope[m].data();
      Complex* o = out[m].data();
      const std::size_t n = base[m].size();
      for (std::size_t i = 0; i < n; ++i)
        o[i] = Complex(b[i].real() + w * k[i].real(),
                       b[i].imag() + w * k[i].imag());
    }
  }

  static void add_scaled(std::array<Field, 3>& acc,
                         const std::array<Field, 3>& slope, double w) {
    for (int m : kComponents) {
      Complex* a = acc[m].data();
      const Complex* k = slope[m].data();
      const std::size_t n = acc[m].size();
      for (std::size_t i = 0; i < n; ++i)
        a[i] = Complex(a[i].real() + w * k[i].real(),
                       a[i].imag() + w * k[i].imag());
    }
  }

  void check_blowup(const SpinorState& s, double t) const {
    double peak = 0;
    for (const auto& f : s.psi)
      for (const Complex& c : f) {
        const double d = std::norm(c);
        if (!std::isfinite(d) || (blowup_threshold_ > 0 && d > blowup_threshold_)) {
          peak = std::max(peak, d);
        }
      }
    if (peak > 0)
      throw BlowupError("integration blowup: non-finite or runaway density",
                        blocks_, t, std::sqrt(peak));
  }

  Grid1D grid_;
  SimCouplings couplings_;
  StepperConfig cfg_;
  FftPlan plan_;
  std::vector<Complex> half_table_, full_table_;
  std::vector<double> v_on_, v_off_, v_work_;
  bool barrier_configured_ = false;
  double phase_ref_ = 0;
  double blowup_threshold_ = 0;
  long blocks_ = 0;
  std::array<Field, 3> y0_, stage_, slope_, acc_;
};

// Single step with the literal operation contract (no gauge unless given).
inline SpinorState step(SpinorState state, const StepperConfig& cfg,
                        const TrapSpec& trap, const SimCouplings& c) {
  Stepper st(state.grid, trap, c, cfg);
  st.set_reference_density(max_density(state));
  st.advance(state);
  return state;
}

struct EvolveSummary {
  long steps = 0;
  double phase_reference = 0;
  double norm_drift_rel = 0;            // max over records
  double magnetization_drift_abs = 0;   // max over records
  double energy_drift_rel = 0;          // max over post-quench records
};

struct EvolveResult {
  SpinorState state;
  EvolveSummary summary;
};

using Observer = std::function<void(const ObservableRecord&)>;

struct SnapshotRequest {
  std::vector<double> times;  // snapped to the nearest record boundary
  std::function<void(const SpinorState&)> sink;
};

// Integrate to cfg.t_end, emitting a record at t = start and then every
// observer_stride steps. Fields handed to snapshot sinks and returned at the
// end are in the physical gauge.
inline EvolveResult evolve(SpinorState state, StepperConfig cfg,
                           const TrapSpec& trap, const SimCouplings& c,
                           const Observer& observer = {},
                           const SnapshotRequest& snapshots = {}) {
  validate(cfg);
  const double t0 = state.t;
  const double span = cfg.t_end - t0;
  if (span * cfg.dt < 0) throw ValidationError("t_end is behind the start time");
  const long steps = std::llround(span / cfg.dt);

  if (!cfg.phase_reference)
    cfg.phase_reference = default_phase_reference(state, trap, c);

  Stepper stepper(state.grid, trap, c, cfg);
  stepper.set_reference_density(max_density(state));
  FftPlan record_plan(state.grid.n_points);
  Field scratch;

  // Records are phase-invariant, so they can be computed in the evolving
  // gauge; snapshots are rotated back before being handed out.
  TrapSpec record_trap = trap;
  const auto trap_at = [&](double t) {
    TrapSpec tt = trap;
    tt.barrier_on = trap.barrier_on && t < cfg.barrier_quench_time;
    return tt;
  };
  const double quench_end = cfg.barrier_quench_time + cfg.barrier_ramp_time;

  std::multimap<long, std::size_t> snap_at;
  for (std::size_t i = 0; i < snapshots.times.size(); ++i) {
    const long stride = cfg.observer_stride;
    long rec = std::llround((snapshots.times[i] - t0) / (cfg.dt * stride));
    rec = std::clamp(rec, 0L, steps / stride);
    snap_at.insert({rec * stride, i});
  }

  EvolveSummary summary;
  summary.steps = steps;
  summary.phase_reference = *cfg.phase_reference;
  double atoms0 = 0, mag0 = 0, energy_ref = 0;
  bool have_energy_ref = false;

  const auto emit = [&](long done) {
    record_trap = trap_at(state.t);
    const ObservableRecord r =
        make_record(state, record_trap, c, record_plan, scratch);
    if (done == 0) {
      atoms0 = r.atoms[0] + r.atoms[1] + r.atoms[2];
      mag0 = r.magnetization;
    } else {
      const double atoms = r.atoms[0] + r.atoms[1] + r.atoms[2];
      summary.norm_drift_rel = std::max(summary.norm_drift_rel,
                                        std::abs(atoms - atoms0) / atoms0);
      summary.magnetization_drift_abs = std::max(
          summary.magnetization_drift_abs, std::abs(r.magnetization - mag0));
    }
    if (state.t >= quench_end - 0.5 * std::abs(cfg.dt)) {
      if (!have_energy_ref) {
        energy_ref = r.energy;
        have_energy_ref = true;
      } else {
        summary.energy_drift_rel =
            std::max(summary.energy_drift_rel,
                     std::abs(r.energy - energy_ref) / std::abs(energy_ref));
      }
    }
    if (observer) observer(r);
    auto [lo, hi] = snap_at.equal_range(done);
    if (lo != hi && snapshots.sink) {
      SpinorState physical = state;
      const double ang = summary.phase_reference * (state.t - t0);
      const Complex rot(std::cos(ang), -std::sin(ang));
      for (auto& f : physical.psi)
        for (Complex& v : f) v *= rot;
      for (auto it = lo; it != hi; ++it) snapshots.sink(physical);
    }
  };

  emit(0);
  long done = 0;
  while (done < steps) {
    const long n = std::min<long>(cfg.observer_stride, steps - done);
    stepper.advance_block(state, n);
    done += n;
    state.t = t0 + done * cfg.dt;  // keep record times exact multiples of dt
    emit(done);
  }

  const double ang = summary.phase_reference * (state.t - t0);
  const Complex rot(std::cos(ang), -std::sin(ang));
  for (auto& f : state.psi)
    for (Complex& v : f) v *= rot;

  EvolveResult result{std::move(state), summary};
  return result;
}

// Independent verification integrator: unsplit classical RK4 on the full
// right-hand side with a 4th-order central finite-difference Laplacian on the
// periodic grid. Deliberately restricted to small grids.
inline SpinorState reference_evolve(SpinorState state, StepperConfig cfg,
                                    const TrapSpec& trap, const SimCouplings& c) {
  validate(cfg);
  if (state.grid.n_points > 256)
    throw ValidationError("reference_evolve is restricted to n_points <= 256");
  const double t0 = state.t;
  const long steps = std::llround((cfg.t_end - t0) / cfg.dt);
  const double mu_ref = cfg.phase_reference.value_or(0.0);
  const int n = state.grid.n_points;
  const double inv12dz2 = 1.0 / (12.0 * state.grid.dz * state.grid.dz);

  TrapSpec on = trap, off = trap;
  on.barrier_on = true;
  off.barrier_on = false;
  const std::vector<double> v_on = v_ext_table(state.grid, on);
  const std::vector<double> v_off = v_ext_table(state.grid, off);
  std::vector<double> v_work(n);
  const auto v_at = [&](double t) -> const std::vector<double>& {
    double w = 0.0;
    if (trap.barrier_on) {
      if (t < cfg.barrier_quench_time)
        w = 1.0;
      else if (cfg.barrier_ramp_time > 0)
        w = std::clamp(
            1.0 - (t - cfg.barrier_quench_time) / cfg.barrier_ramp_time, 0.0,
            1.0);
    }
    if (w <= 0) return v_off;
    if (w >= 1) return v_on;
    for (int i = 0; i < n; ++i)
      v_work[i] = v_off[i] + w * (v_on[i] - v_off[i]);
    return v_work;
  };

  std::array<Field, 3> y0, stage, slope, acc;
  for (auto& f : y0) f.resize(n);
  for (auto& f : stage) f.resize(n);
  for (auto& f : slope) f.resize(n);
  for (auto& f : acc) f.resize(n);

  const auto rhs = [&](const std::array<Field, 3>& psi, double t,
                       std::array<Field, 3>& out) {
    interaction_rhs(psi, v_at(t), c, mu_ref, out);
    for (int m : kComponents) {
      const Complex* f = psi[m].data();
      Complex* o = out[m].data();
      for (int i = 0; i < n; ++i) {
        const int im2 = (i - 2 + n) % n, im1 = (i - 1 + n) % n;
        const int ip1 = (i + 1) % n, ip2 = (i + 2) % n;
        const double d2r =
            (-f[im2].real() + 16.0 * f[im1].real() - 30.0 * f[i].real() +
             16.0 * f[ip1].real() - f[ip2].real()) *
            inv12dz2;
        const double d2x =
            (-f[im2].imag() + 16.0 * f[im1].imag() - 30.0 * f[i].imag() +
             16.0 * f[ip1].imag() - f[ip2].imag()) *
            inv12dz2;
        // add -i * (-1/2 d^2/dz^2) psi = +i/2 * psi''
        o[i] += Complex(-0.5 * d2x, 0.5 * d2r);
      }
    }
  };

  const double blowup_threshold =
      cfg.blowup_density_factor * std::max(max_density(state), 0.0);
  const auto lin = [&](const std::array<Field, 3>& b,
                       const std::array<Field, 3>& k, double w,
                       std::array<Field, 3>& out) {
    for (int m : kComponents)
      for (int i = 0; i < n; ++i)
        out[m][i] = b[m][i] + w * k[m][i];
  };

  for (long sidx = 0; sidx < steps; ++sidx) {
    const double t = t0 + sidx * cfg.dt;
    const double dt = cfg.dt;
    y0 = state.psi;
    rhs(y0, t, slope);
    lin(y0, slope, dt / 6.0, acc);
    lin(y0, slope, dt / 2.0, stage);
    rhs(stage, t + 0.5 * dt, slope);
    for (int m : kComponents)
      for (int i = 0; i < n; ++i) acc[m][i] += (dt / 3.0) * slope[m][i];
    lin(y0, slope, dt / 2.0, stage);
    rhs(stage, t + 0.5 * dt, slope);
    for (int m : kComponents)
      for (int i = 0; i < n; ++i) acc[m][i] += (dt / 3.0) * slope[m][i];
    lin(y0, slope, dt, stage);
    rhs(stage, t + dt, slope);
    for (int m : kComponents)
      for (int i = 0; i < n; ++i) acc[m][i] += (dt / 6.0) * slope[m][i];
    state.psi = acc;
    state.t = t0 + (sidx + 1) * cfg.dt;
    for (const auto& f : state.psi)
      for (const Complex& cc : f) {
        const double d = std::norm(cc);
        if (!std::isfinite(d) || (blowup_threshold > 0 && d > blowup_threshold))
          throw BlowupError("reference integration blowup", sidx + 1, state.t,
                            std::sqrt(d));
      }
  }
  if (mu_ref != 0.0) {
    const double ang = mu_ref * (state.t - t0);
    const Complex rot(std::cos(ang), -std::sin(ang));
    for (auto& f : state.psi)
      for (Complex& v : f) v *= rot;
  }
  return state;
}

}  // namespace spinsim
