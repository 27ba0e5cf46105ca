#pragma once

// Run configuration stored as flat `key = value` lines with section prefixes
// (chart.rho, scheme.nu, data.mode.0.k, ...). Blank lines and lines starting
// with '#' are ignored. Reals are written in shortest round-trip form so a
// parse/serialize cycle is bit exact.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conevort/initial_data.hpp"
#include "conevort/report.hpp"
#include "conevort/scheme.hpp"

namespace conevort {

using KeyValues = std::map<std::string, std::string>;

struct RunConfig {
  double rho = 0.05;
  double nu = 1e-3;
  std::vector<double> nus{1e-2, 1e-3, 1e-4};
  int grid_n = 25;
  std::optional<double> half_extent;  // rho when unset
  std::optional<double> dt;           // rho / 64 when unset
  double picard_tol = 1e-9;
  int picard_max = 12;
  int m_norm = 2;
  bool transport = true;
  bool nonlinear = true;
  bool measure_constant = true;

  InitialData data = InitialData::standard();

  std::string output_dir = "conevort-out";
  int checkpoint_every = 8;

  double bounds_sup = 1.0;
  int bounds_resolution = 200;
  std::vector<double> mass_nus{1e-1, 1e-2, 1e-3, 1e-4};
  int damping_samples = 100000;

  bool operator==(const RunConfig&) const = default;

  SchemeConfig scheme(double viscosity) const;
  Grid3 grid() const;

  KeyValues to_key_values() const;
  static RunConfig from_key_values(const KeyValues& kv);

  std::string serialize() const;
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

/// Splits `key = value` lines; duplicate keys and malformed lines throw ConfigError.
KeyValues parse_key_values(std::string_view text);

}  // namespace conevort
