#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spinsim/errors.hpp"

namespace spinsim {

// Flat, human-editable run description. Every physical quantity carries its
// unit in the key name; everything else is dimensionless. This struct *is*
// the on-disk config format (JSON with a fixed key order).
struct RunConfig {
  std::string preset;  // optional base preset; empty for fully explicit runs

  double atom_count = 0;
  double atomic_mass_u = 0;
  double a0_bohr = 0;
  double a2_bohr = 0;
  double trap_freq_z_hz = 0;     // omega_z / 2 pi
  double trap_freq_perp_hz = 0;  // omega_perp / 2 pi

  double barrier_height_hw = 0;  // units of hbar * omega_z
  double barrier_sigma_um = 0;
  bool antiferromagnetic = false;
  bool displaced_reference = false;
  bool recenter_initial_state = false;

  double lambda_plus_left = 0, lambda_plus_right = 0;
  double lambda_zero_left = 0, lambda_zero_right = 0;
  double lambda_minus_left = 0, lambda_minus_right = 0;
  double relative_phase_rad = 0;

  double grid_half_extent_um = 0;
  int grid_points = 0;

  double dt_us = 0;
  double t_end_ms = 0;
  long observer_stride = 0;
  double barrier_quench_ms = 0;
  double barrier_ramp_ms = 0;
  std::vector<double> checkpoint_ms;
  double bin_width_um = 4.0;

  double relax_energy_tol = 1e-12;
  double relax_residual_tol = 1e-8;
  long relax_max_iter = 200000;

  bool deterministic = true;  // recorded; nothing in the pipeline is stochastic
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson config_to_ojson(const RunConfig& c) {
  ojson j;
  j["preset"] = c.preset;
  j["atom_count"] = c.atom_count;
  j["atomic_mass_u"] = c.atomic_mass_u;
  j["a0_bohr"] = c.a0_bohr;
  j["a2_bohr"] = c.a2_bohr;
  j["trap_freq_z_hz"] = c.trap_freq_z_hz;
  j["trap_freq_perp_hz"] = c.trap_freq_perp_hz;
  j["barrier_height_hw"] = c.barrier_height_hw;
  j["barrier_sigma_um"] = c.barrier_sigma_um;
  j["antiferromagnetic"] = c.antiferromagnetic;
  j["displaced_reference"] = c.displaced_reference;
  j["recenter_initial_state"] = c.recenter_initial_state;
  j["lambda_plus_left"] = c.lambda_plus_left;
  j["lambda_plus_right"] = c.lambda_plus_right;
  j["lambda_zero_left"] = c.lambda_zero_left;
  j["lambda_zero_right"] = c.lambda_zero_right;
  j["lambda_minus_left"] = c.lambda_minus_left;
  j["lambda_minus_right"] = c.lambda_minus_right;
  j["relative_phase_rad"] = c.relative_phase_rad;
  j["grid_half_extent_um"] = c.grid_half_extent_um;
  j["grid_points"] = c.grid_points;
  j["dt_us"] = c.dt_us;
  j["t_end_ms"] = c.t_end_ms;
  j["observer_stride"] = c.observer_stride;
  j["barrier_quench_ms"] = c.barrier_quench_ms;
  j["barrier_ramp_ms"] = c.barrier_ramp_ms;
  j["checkpoint_ms"] = c.checkpoint_ms;
  j["bin_width_um"] = c.bin_width_um;
  j["relax_energy_tol"] = c.relax_energy_tol;
  j["relax_residual_tol"] = c.relax_residual_tol;
  j["relax_max_iter"] = c.relax_max_iter;
  j["deterministic"] = c.deterministic;
  return j;
}

template <typename T>
void assign_key(const ojson& j, const std::string& key, T& out) {
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

inline void apply_json_keys(const ojson& j, RunConfig& c) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key == "preset") assign_key(j, key, c.preset);
    else if (key == "atom_count") assign_key(j, key, c.atom_count);
    else if (key == "atomic_mass_u") assign_key(j, key, c.atomic_mass_u);
    else if (key == "a0_bohr") assign_key(j, key, c.a0_bohr);
    else if (key == "a2_bohr") assign_key(j, key, c.a2_bohr);
    else if (key == "trap_freq_z_hz") assign_key(j, key, c.trap_freq_z_hz);
    else if (key == "trap_freq_perp_hz") assign_key(j, key, c.trap_freq_perp_hz);
    else if (key == "barrier_height_hw") assign_key(j, key, c.barrier_height_hw);
    else if (key == "barrier_sigma_um") assign_key(j, key, c.barrier_sigma_um);
    else if (key == "antiferromagnetic") assign_key(j, key, c.antiferromagnetic);
    else if (key == "displaced_reference") assign_key(j, key, c.displaced_reference);
    else if (key == "recenter_initial_state") assign_key(j, key, c.recenter_initial_state);
    else if (key == "lambda_plus_left") assign_key(j, key, c.lambda_plus_left);
    else if (key == "lambda_plus_right") assign_key(j, key, c.lambda_plus_right);
    else if (key == "lambda_zero_left") assign_key(j, key, c.lambda_zero_left);
    else if (key == "lambda_zero_right") assign_key(j, key, c.lambda_zero_right);
    else if (key == "lambda_minus_left") assign_key(j, key, c.lambda_minus_left);
    else if (key == "lambda_minus_right") assign_key(j, key, c.lambda_minus_right);
    else if (key == "relative_phase_rad") assign_key(j, key, c.relative_phase_rad);
    else if (key == "grid_half_extent_um") assign_key(j, key, c.grid_half_extent_um);
    else if (key == "grid_points") assign_key(j, key, c.grid_points);
    else if (key == "dt_us") assign_key(j, key, c.dt_us);
    else if (key == "t_end_ms") assign_key(j, key, c.t_end_ms);
    else if (key == "observer_stride") assign_key(j, key, c.observer_stride);
    else if (key == "barrier_quench_ms") assign_key(j, key, c.barrier_quench_ms);
    else if (key == "barrier_ramp_ms") assign_key(j, key, c.barrier_ramp_ms);
    else if (key == "checkpoint_ms") assign_key(j, key, c.checkpoint_ms);
    else if (key == "bin_width_um") assign_key(j, key, c.bin_width_um);
    else if (key == "relax_energy_tol") assign_key(j, key, c.relax_energy_tol);
    else if (key == "relax_residual_tol") assign_key(j, key, c.relax_residual_tol);
    else if (key == "relax_max_iter") assign_key(j, key, c.relax_max_iter);
    else if (key == "deterministic") assign_key(j, key, c.deterministic);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace detail

// Canonical serialization; parse -> serialize is byte-identical.
inline std::string config_to_json(const RunConfig& c) {
  return detail::config_to_ojson(c).dump(2) + "\n";
}

// Declared here, defined with the preset tables in scenarios.hpp.
RunConfig preset_config(const std::string& name);

inline RunConfig config_from_json(const std::string& text) {
  detail::ojson j;
  try {
    j = detail::ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  if (j.contains("preset") && j["preset"].is_string() &&
      !j["preset"].get<std::string>().empty()) {
    c = preset_config(j["preset"].get<std::string>());
  }
  detail::apply_json_keys(j, c);
  return c;
}

}  // namespace spinsim
