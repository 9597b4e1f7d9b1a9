#pragma once

#include "ets/checkpoint.hpp"
#include "ets/config.hpp"
#include "ets/hamiltonian.hpp"
#include "ets/observables.hpp"
#include "ets/propagator.hpp"
#include "ets/stiffness.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ets {

/// Grid, pulse, schedule and assembled (optionally filtered) Hamiltonian
/// for one configuration.
struct System {
  std::shared_ptr<const RadialGrid> grid;
  std::shared_ptr<const StiffnessFilter> filter;
  std::unique_ptr<Hamiltonian> hamiltonian;
};

/// l_max overrides the config value when >= 0.
System build_system(const RunConfig& config, int l_max = -1);

/// Lowest l = 0 eigenpair of the field-free block at t = 0 (R = 1), placed
/// in a zeroed state with l_max + 1 blocks. energy receives the eigenvalue.
StateVector ground_state(const Hamiltonian& h, double* energy = nullptr);

struct RunOptions {
  bool write_outputs = true;
  /// Stop after this many steps (checkpoint written); for tests.
  std::optional<long> stop_after;
  /// Continue from a checkpoint instead of the ground state.
  const Checkpoint* resume = nullptr;
};

struct RunResult {
  StateVector final_state;
  long steps = 0;
  double ground_energy = 0.0;
  std::vector<double> time;          // t_n for the acceleration trace
  std::vector<double> acceleration;
  std::vector<double> field;
  std::vector<int> k_used;
  std::vector<double> k_error;
  std::vector<DensitySnapshot> snapshots;
  std::optional<Spectrum> spectrum;
  std::int64_t nonzeros = 0;
  std::map<std::string, double> timings;  // seconds per phase
  std::string localization;               // filter report, if any
};

/// Ground state, time loop with midpoint updates, scheduled density
/// snapshots, acceleration trace, K log and checkpoints. Output files go to
/// config.output_dir when write_outputs is set; meta.json is written last.
RunResult run(const RunConfig& config, const RunOptions& options = {});

struct ScanRow {
  int l_max = 0;
  double dt = 0.0;
  int k_max = 0;               // cap + 1 means "above cap"
  std::optional<int> estimate;
};

/// K_max over config.scan_l_max x config.scan_dt on the field-free
/// assembly (filtered when config.filter is on).
std::vector<ScanRow> scan_kmax(const RunConfig& config, int cap = 1000);

std::string version();

}  // namespace ets
