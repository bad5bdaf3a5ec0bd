#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spinsim/groundstate.hpp"
#include "spinsim/io.hpp"
#include "spinsim/scenarios.hpp"

namespace spinsim {

// Build the initial state by the three preparation steps: relax the scalar
// condensate in the full double-well potential, distribute it over the Zeeman
// components per well, and (variants) recenter or swap in the displaced
// harmonic ground state.
inline SpinorState prepare_initial_state(const Scenario& sc,
                                         RelaxationReport* report_out = nullptr,
                                         std::vector<double>* scalar_out = nullptr) {
  const SimCouplings c = sc.units.sim_couplings();
  auto [field, report] =
      scalar_ground_state(sc.grid, sc.trap, c, sc.setup.atom_count, sc.relaxation);
  SpinorState state;
  if (sc.displaced_reference) {
    // Reference state: harmonic-trap ground state translated to the center of
    // mass of the corresponding barrier-released state.
    SpinorState wells =
        split_populations(field, sc.populations, sc.grid, sc.separation_delta);
    const double z0 = center_of_mass(wells);
    TrapSpec harmonic = sc.trap;
    harmonic.barrier_on = false;
    auto [hfield, hreport] = scalar_ground_state(sc.grid, harmonic, c,
                                                 sc.setup.atom_count, sc.relaxation);
    state = make_state(sc.grid);
    for (int m : kComponents) {
      const double amp = std::sqrt(sc.populations.total(m));
      for (int i = 0; i < sc.grid.n_points; ++i)
        state.psi[m][i] = Complex(amp * hfield[i], 0.0);
    }
    translate(state, static_cast<int>(std::lround(z0 / sc.grid.dz)));
    report = hreport;
    field = hfield;
  } else {
    state = split_populations(field, sc.populations, sc.grid, sc.separation_delta);
  }
  if (sc.recenter_initial_state) {
    const double z0 = center_of_mass(state);
    translate(state, -static_cast<int>(std::lround(z0 / sc.grid.dz)));
  }
  if (sc.relative_phase != 0) {
    const Complex ph(std::cos(sc.relative_phase), std::sin(sc.relative_phase));
    for (Complex& v : state.psi[kPlus]) v *= ph;
  }
  state.t = 0;
  if (report_out) *report_out = report;
  if (scalar_out) *scalar_out = field;
  return state;
}

struct RunResult {
  std::filesystem::path dir;
  Scenario scenario;
  RelaxationReport relaxation;
  std::vector<ObservableRecord> records;
  EvolveSummary summary;
  SpinorState final_state;
  double initial_overlap_atoms = 0;
};

namespace detail {

inline std::string profile_filename(double t_ms) {
  return "profile_" + fmt_g(t_ms) + "ms.csv";
}

inline nlohmann::ordered_json summary_json(const RunResult& res,
                                           double wall_seconds) {
  const Scenario& sc = res.scenario;
  nlohmann::ordered_json j;
  j["scenario"] = sc.name;
  j["steps"] = res.summary.steps;
  j["phase_reference_hw"] = res.summary.phase_reference;
  j["norm_drift_rel"] = res.summary.norm_drift_rel;
  j["magnetization_drift_abs"] = res.summary.magnetization_drift_abs;
  j["energy_drift_rel"] = res.summary.energy_drift_rel;
  j["initial_overlap_atoms"] = res.initial_overlap_atoms;
  j["relaxation"] = {{"final_energy_hw", res.relaxation.final_energy},
                     {"energy_delta_last_step_hw", res.relaxation.energy_delta_last_step},
                     {"iterations", res.relaxation.iterations},
                     {"residual", res.relaxation.residual}};
  nlohmann::ordered_json freqs;
  const double sample_dt_s =
      res.records.size() > 1
          ? sc.units.time_from_sim(res.records[1].t - res.records[0].t)
          : 0.0;
  const auto freq_of = [&](const char* key, auto getter) {
    std::vector<double> series;
    series.reserve(res.records.size());
    for (const auto& r : res.records) series.push_back(getter(r));
    try {
      freqs[key] = dominant_frequency(series, sample_dt_s);
    } catch (const ValidationError&) {
      freqs[key] = nullptr;
    }
  };
  freq_of("com_z", [](const ObservableRecord& r) { return r.com_z; });
  freq_of("lamL+1", [](const ObservableRecord& r) { return r.lambda_left[kPlus]; });
  freq_of("lamL0", [](const ObservableRecord& r) { return r.lambda_left[kZero]; });
  freq_of("lamL-1", [](const ObservableRecord& r) { return r.lambda_left[kMinus]; });
  j["dominant_frequency_hz"] = freqs;
  j["wall_time_s"] = wall_seconds;
  return j;
}

}  // namespace detail

// Execute one configured run into `out_dir`. The directory afterwards holds
// the resolved config snapshot, the observable series, density profiles at
// the checkpoint times, the converged scalar field, the final state and a
// summary with conservation drifts and dominant frequencies.
inline RunResult run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const auto t_start = std::chrono::steady_clock::now();
  RunResult res;
  res.scenario = resolve_scenario(cfg);
  const Scenario& sc = res.scenario;
  res.dir = out_dir;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw ConfigError("cannot create output directory " + out_dir.string());
  write_text_file(out_dir / "config_resolved.json", config_to_json(sc.config));

  std::vector<double> scalar;
  SpinorState state = prepare_initial_state(sc, &res.relaxation, &scalar);
  write_scalar_field_csv(out_dir / "scalar_groundstate.csv", scalar, sc.grid,
                         sc.units);
  res.initial_overlap_atoms = overlap_integral(state, sc.separation_delta);

  res.records.reserve(
      static_cast<std::size_t>(sc.stepper.t_end / sc.stepper.dt /
                               sc.stepper.observer_stride) + 2);
  const Observer observer = [&](const ObservableRecord& r) {
    res.records.push_back(r);
  };
  SnapshotRequest snaps;
  if (!sc.checkpoint_times.empty()) {
    std::filesystem::create_directories(out_dir / "profiles", ec);
    snaps.times = sc.checkpoint_times;
    snaps.sink = [&](const SpinorState& snap) {
      const double t_ms = sc.units.time_from_sim(snap.t) * 1e3;
      write_profile_csv(out_dir / "profiles" / detail::profile_filename(t_ms),
                        binned_density(snap, sc.bin_width), sc.units);
    };
  }

  EvolveResult evr = evolve(std::move(state), sc.stepper, sc.trap,
                            sc.units.sim_couplings(), observer, snaps);
  res.summary = evr.summary;
  res.final_state = std::move(evr.state);

  write_observables_csv(out_dir / "observables.csv", res.records, sc.units);
  write_checkpoint(out_dir / "final_state.txt", res.final_state, sc.units);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  write_text_file(out_dir / "summary.json",
                  detail::summary_json(res, wall).dump(2) + "\n");
  return res;
}

struct CompareReport {
  double max_abs_diff = 0;
  double rms_diff = 0;
  std::size_t rows = 0;
};

// Compare one observable column between two run directories. The time grids
// must agree exactly.
inline CompareReport compare(const std::filesystem::path& dir_a,
                             const std::filesystem::path& dir_b,
                             const std::string& column) {
  const CsvTable a = load_csv(dir_a / "observables.csv");
  const CsvTable b = load_csv(dir_b / "observables.csv");
  const std::vector<double>& ca = a.column(column);
  const std::vector<double>& cb = b.column(column);
  const std::vector<double>& ta = a.column("t_ms");
  const std::vector<double>& tb = b.column("t_ms");
  if (ta.size() != tb.size())
    throw CompareError("runs have different record counts");
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (ta[i] != tb[i]) throw CompareError("mismatched time grids");
  CompareReport rep;
  rep.rows = ca.size();
  double acc = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const double d = std::abs(ca[i] - cb[i]);
    rep.max_abs_diff = std::max(rep.max_abs_diff, d);
    acc += d * d;
  }
  rep.rms_diff = ca.empty() ? 0.0 : std::sqrt(acc / ca.size());
  return rep;
}

}  // namespace spinsim
