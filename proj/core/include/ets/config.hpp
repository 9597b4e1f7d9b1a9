#pragma once

#include "ets/grid.hpp"
#include "ets/pulse.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ets {

/// Run configuration read from a flat `key = value` file.
///
/// Blank lines and `#` comments are ignored; unknown or repeated keys are
/// errors. Lengths and times are atomic units, the wavelength is in nm and
/// the intensity in W/cm^2. Times of the run schedule are in optical cycles.
struct RunConfig {
  GridSpec grid;

  double wavelength_nm = 800.0;
  double intensity_wcm2 = 1e14;
  double cycles = 3.0;
  PulseShape pulse_shape = PulseShape::vector_potential;
  Gauge gauge = Gauge::length;

  bool scaling = true;
  double r_inf = 0.0;
  std::optional<double> scaling_period;  // defaults to the pulse duration

  int l_max = 0;
  double dt = 0.05;
  double eps = 1e-15;
  int max_k = 1000;

  bool filter = false;
  int filter_n_fe = 10;
  double e_cut = 900.0;
  double edge_threshold = 0.1;

  double total_cycles = 3.0;
  std::vector<double> snapshot_cycles;
  bool hhg = true;
  double hhg_omega_max_up = 4.0;
  int hhg_points = 2000;
  double density_r_max = 0.0;  // <= 0: up to the simulated radius
  double density_dr = 0.1;
  double checkpoint_cycles = 0.0;  // <= 0: final checkpoint only
  std::string output_dir = "out";
  std::uint64_t seed = 12345;

  std::vector<int> scan_l_max{0, 50, 100, 200};
  std::vector<double> scan_dt{0.01, 0.05, 0.1};
  int scan_trials = 100;

  /// Throws ConfigError for inconsistent values.
  void validate() const;

  PulseSpec pulse_spec() const;
  /// Time step count of the whole run, total_cycles * cycle / dt rounded.
  long total_steps() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical `key = value` text; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& c);

/// FNV-1a hash of the canonical text of the keys that change the state
/// (grid, pulse, scaling, basis truncation, propagator and filter).
std::uint64_t fingerprint(const RunConfig& c);

}  // namespace ets
