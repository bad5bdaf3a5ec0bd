#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinsim/observables.hpp"
#include "spinsim/state.hpp"
#include "spinsim/units.hpp"

namespace spinsim {

// Shortest exact decimal form; %.17g round-trips doubles bit-exactly.
inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_e(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  out << content;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline constexpr const char* kObservablesHeader =
    "t_ms,N+1,N0,N-1,lam+1,lam0,lam-1,lamL+1,lamL0,lamL-1,magnetization,"
    "com_z_um,energy";

inline void write_observables_csv(const std::filesystem::path& path,
                                  const std::vector<ObservableRecord>& records,
                                  const SimUnits& units) {
  std::string out;
  out.reserve(records.size() * 256 + 128);
  out += kObservablesHeader;
  out += '\n';
  for (const ObservableRecord& r : records) {
    out += fmt_g(units.time_from_sim(r.t) * 1e3);
    for (int m : kComponents) out += "," + fmt_g(r.atoms[m]);
    for (int m : kComponents) out += "," + fmt_g(r.lambda[m]);
    for (int m : kComponents) out += "," + fmt_g(r.lambda_left[m]);
    out += "," + fmt_g(r.magnetization);
    out += "," + fmt_g(units.length_from_sim(r.com_z) * 1e6);
    out += "," + fmt_g(r.energy);
    out += '\n';
  }
  write_text_file(path, out);
}

struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t i = 0; i < headers.size(); ++i)
      if (headers[i] == name) return columns[i];
    throw CompareError("column '" + name + "' not found");
  }
  bool has_column(const std::string& name) const {
    for (const auto& h : headers)
      if (h == name) return true;
    return false;
  }
};

inline CsvTable load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CompareError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw CompareError("empty csv: " + path.string());
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.headers.push_back(cell);
  t.columns.resize(t.headers.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t i = 0;
    while (std::getline(ls, cell, ',')) {
      if (i >= t.columns.size())
        throw CompareError("ragged csv row in " + path.string());
      t.columns[i++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (i != t.columns.size())
      throw CompareError("ragged csv row in " + path.string());
  }
  return t;
}

inline void write_profile_csv(const std::filesystem::path& path,
                              const DensityProfile& profile,
                              const SimUnits& units) {
  std::string out = "bin_center_um,n+1,n0,n-1\n";
  for (std::size_t b = 0; b < profile.bin_centers.size(); ++b) {
    out += fmt_g(units.length_from_sim(profile.bin_centers[b]) * 1e6);
    for (int m : kComponents) out += "," + fmt_g(profile.counts[m][b]);
    out += '\n';
  }
  write_text_file(path, out);
}

// Columnar state dump: grid metadata in comment lines, then one row per
// sample with real and imaginary parts of each component.
inline void write_checkpoint(const std::filesystem::path& path,
                             const SpinorState& s, const SimUnits& units) {
  const double half_um =
      units.length_from_sim(0.5 * (s.grid.z_max - s.grid.z_min)) * 1e6;
  std::string out;
  out += "# spinsim state checkpoint\n";
  out += "# n_points " + std::to_string(s.grid.n_points) + "\n";
  out += "# half_extent_um " + fmt_g(half_um) + "\n";
  out += "# t_ms " + fmt_g(units.time_from_sim(s.t) * 1e3) + "\n";
  out += "# columns z_um re+1 im+1 re0 im0 re-1 im-1\n";
  for (int i = 0; i < s.grid.n_points; ++i) {
    out += fmt_e(units.length_from_sim(s.grid.z[i]) * 1e6);
    for (int m : kComponents) {
      out += " " + fmt_e(s.psi[m][i].real());
      out += " " + fmt_e(s.psi[m][i].imag());
    }
    out += '\n';
  }
  write_text_file(path, out);
}

inline SpinorState read_checkpoint(const std::filesystem::path& path,
                                   const SimUnits& units) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint: " + path.string());
  std::string line;
  int n_points = 0;
  double half_um = 0, t_ms = 0;
  std::vector<std::array<double, 7>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::stringstream ss(line);
      std::string hash, key;
      ss >> hash >> key;
      if (key == "n_points") ss >> n_points;
      else if (key == "half_extent_um") ss >> half_um;
      else if (key == "t_ms") ss >> t_ms;
      continue;
    }
    std::stringstream ss(line);
    std::array<double, 7> row{};
    for (double& v : row)
      if (!(ss >> v)) throw ConfigError("bad checkpoint row: " + path.string());
    rows.push_back(row);
  }
  if (n_points <= 0 || static_cast<int>(rows.size()) != n_points)
    throw ConfigError("checkpoint metadata/rows mismatch: " + path.string());
  SpinorState s =
      make_state(make_grid(units.length_to_sim(2.0 * half_um * 1e-6), n_points));
  s.t = units.time_to_sim(t_ms * 1e-3);
  for (int i = 0; i < n_points; ++i)
    for (int m : kComponents)
      s.psi[m][i] = Complex(rows[i][1 + 2 * m], rows[i][2 + 2 * m]);
  return s;
}

inline void write_scalar_field_csv(const std::filesystem::path& path,
                                   const std::vector<double>& field,
                                   const Grid1D& grid, const SimUnits& units) {
  std::string out = "z_um,psi\n";
  for (std::size_t i = 0; i < field.size(); ++i) {
    out += fmt_g(units.length_from_sim(grid.z[i]) * 1e6);
    out += "," + fmt_g(field[i]);
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace spinsim
