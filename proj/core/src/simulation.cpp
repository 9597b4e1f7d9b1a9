#include "ets/simulation.hpp"

#include "ets/eigensolver.hpp"
#include "ets/error.hpp"

#include <json.hpp>

#ifdef ETS_HAVE_OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifndef ETS_VERSION
#define ETS_VERSION "0.0.0"
#endif

namespace ets {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> radial_samples(const RunConfig& c, double r_end) {
  const double limit = c.density_r_max > 0.0 ? std::min(c.density_r_max, r_end) : r_end;
  std::vector<double> r;
  const long count = static_cast<long>(std::floor(limit / c.density_dr + 1e-9));
  r.reserve(count + 1);
  for (long k = 0; k <= count; ++k) r.push_back(k * c.density_dr);
  return r;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("output: cannot write '" + tmp + "'");
    out << text;
    if (!out) throw ConfigError("output: write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "density_%.4f.csv", t);
  return buf;
}

std::string csv_density(const DensitySnapshot& s) {
  std::ostringstream os;
  os << "r,rho\n";
  char line[64];
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    std::snprintf(line, sizeof line, "%.10g,%.17g\n", s.r[i], s.rho[i]);
    os << line;
  }
  return os.str();
}

int thread_count() {
#ifdef ETS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

ScalingSchedule make_schedule(const RunConfig& c, const Pulse& pulse) {
  const double period = c.scaling_period.value_or(pulse.duration());
  return ScalingSchedule(c.r_inf, period, c.scaling && c.r_inf > 0.0);
}

}  // namespace

std::string version() { return ETS_VERSION; }

System build_system(const RunConfig& config, int l_max) {
  config.validate();
  System s;
  if (l_max < 0) l_max = config.l_max;
  auto grid = std::make_shared<RadialGrid>(config.grid);
  s.grid = grid;
  const Pulse pulse(config.pulse_spec());
  s.hamiltonian = std::make_unique<Hamiltonian>(grid, l_max, make_schedule(config, pulse), pulse);
  if (config.filter) {
    FilterSpec fs;
    fs.n_fe = config.filter_n_fe;
    fs.e_cut = config.e_cut;
    fs.edge_threshold = config.edge_threshold;
    s.filter = make_filter(*grid, l_max, config.gauge, fs, true);
    patch(*s.hamiltonian, s.filter);
  }
  return s;
}

StateVector ground_state(const Hamiltonian& h, double* energy) {
  const auto pairs = lowest_eigenpairs(h.diagonal_block(0), 1);
  StateVector psi(h.l_max(), h.radial_size(), h.time());
  const Eigen::VectorXd& v = pairs.front().vector;
  for (int k = 0; k < h.radial_size(); ++k) psi.coeffs[k] = v(k);
  const double nrm = norm(psi);
  for (auto& c : psi.coeffs) c /= nrm;
  if (energy) *energy = pairs.front().value;
  return psi;
}

RunResult run(const RunConfig& config, const RunOptions& options) {
  const auto t_start = Clock::now();
  RunResult res;
  System sys = build_system(config);
  Hamiltonian& h = *sys.hamiltonian;
  const RadialGrid& grid = *sys.grid;
  const Pulse& pulse = h.pulse();
  const ScalingSchedule& schedule = h.schedule();
  const double dt = config.dt;
  const double cycle = pulse.optical_cycle();
  res.timings["setup"] = seconds_since(t_start);
  res.nonzeros = h.nonzero_count();
  if (sys.filter) res.localization = sys.filter->localization_report();

  namespace fs = std::filesystem;
  const fs::path out_dir(config.output_dir);
  if (options.write_outputs) fs::create_directories(out_dir);

  const std::uint64_t fp = fingerprint(config);
  StateVector psi;
  long start = 0;
  const auto t_gs = Clock::now();
  if (options.resume) {
    const Checkpoint& c = *options.resume;
    if (c.fingerprint != fp) {
      throw ConfigError("resume: checkpoint fingerprint does not match the configuration");
    }
    if (c.state.l_max != h.l_max() || c.state.radial_size != h.radial_size()) {
      throw ConfigError("resume: checkpoint dimensions do not match the grid");
    }
    psi = c.state;
    start = c.step;
    res.acceleration = c.acceleration;
    res.field = c.field;
    res.k_used = c.k_used;
    res.k_error = c.k_error;
    for (std::size_t i = 0; i < res.acceleration.size(); ++i) res.time.push_back(i * dt);
  } else {
    h.update_time(0.0);
    psi = ground_state(h, &res.ground_energy);
    psi.t = 0.0;
    if (config.hhg) {
      const double f0 = pulse.field_and_potential(0.0).field;
      res.time.push_back(0.0);
      res.acceleration.push_back(dipole_acceleration(psi, grid, h.coupling(), current_scale(schedule, 0.0), f0));
      res.field.push_back(f0);
    }
  }
  res.timings["ground_state"] = seconds_since(t_gs);

  const long total = config.total_steps();
  std::set<long> snapshot_steps;
  for (double s : config.snapshot_cycles) snapshot_steps.insert(std::lround(s * cycle / dt));
  const long checkpoint_every =
      config.checkpoint_cycles > 0.0 ? std::max(1L, std::lround(config.checkpoint_cycles * cycle / dt)) : 0;

  auto take_snapshot = [&](double t) {
    const ScaleState s = current_scale(schedule, t);
    auto snap = density(psi, grid, schedule, t, radial_samples(config, simulated_radius(grid, s)));
    if (options.write_outputs) write_text_atomic(out_dir / snapshot_name(t), csv_density(snap));
    res.snapshots.push_back(std::move(snap));
  };
  auto make_checkpoint = [&](long step) {
    Checkpoint c;
    c.config_text = to_text(config);
    c.fingerprint = fp;
    c.step = step;
    c.state = psi;
    c.acceleration = res.acceleration;
    c.field = res.field;
    c.k_used = res.k_used;
    c.k_error = res.k_error;
    return c;
  };

  if (start == 0 && snapshot_steps.count(0)) take_snapshot(0.0);

  PropagatorSpec ps;
  ps.eps = config.eps;
  ps.max_k = config.max_k;
  LanczosPropagator prop(ps);
  const auto t_prop = Clock::now();
  double snapshot_time = 0.0;
  long n = start;
  for (; n < total; ++n) {
    const double t = n * dt;
    StepReport rep;
    try {
      rep = prop.step(h, std::span<cplx>(psi.coeffs), t, dt);
    } catch (const StiffnessError& e) {
      throw StiffnessError(std::string(e.what()) + " (step " + std::to_string(n) +
                           ", t = " + std::to_string(t) + ")");
    }
    const double t1 = (n + 1) * dt;
    psi.t = t1;
    if (!std::isfinite(rep.norm_after)) {
      throw NumericalError("run: non-finite state at t = " + std::to_string(t1));
    }
    res.k_used.push_back(rep.k_used);
    res.k_error.push_back(rep.error_estimate);
    if (config.hhg) {
      const double f1 = pulse.field_and_potential(t1).field;
      res.time.push_back(t1);
      res.acceleration.push_back(
          dipole_acceleration(psi, grid, h.coupling(), current_scale(schedule, t1), f1));
      res.field.push_back(f1);
    }
    if (snapshot_steps.count(n + 1)) {
      const auto t_snap = Clock::now();
      take_snapshot(t1);
      snapshot_time += seconds_since(t_snap);
    }
    if (options.write_outputs && checkpoint_every > 0 && (n + 1) % checkpoint_every == 0) {
      write_checkpoint((out_dir / "checkpoint.bin").string(), make_checkpoint(n + 1));
    }
    if (options.stop_after && n + 1 >= *options.stop_after) {
      ++n;
      break;
    }
  }
  res.steps = n;
  res.timings["propagation"] = seconds_since(t_prop) - snapshot_time;
  res.timings["snapshots"] = snapshot_time;

  const auto t_out = Clock::now();
  if (config.hhg && n >= total) {
    const long last = std::min<long>(std::lround(pulse.duration() / dt),
                                     static_cast<long>(res.acceleration.size()) - 1);
    std::vector<double> trace(res.acceleration.begin(), res.acceleration.begin() + last + 1);
    const double up = pulse.ponderomotive_energy();
    const double omega_max = config.hhg_omega_max_up * (up > 0.0 ? up : pulse.spec().omega);
    std::vector<double> omega(config.hhg_points);
    for (int j = 0; j < config.hhg_points; ++j) omega[j] = omega_max * (j + 1) / config.hhg_points;
    res.spectrum = hhg_spectrum(trace, 0.0, dt, omega, up);
  }

  if (options.write_outputs) {
    char line[128];
    if (config.hhg) {
      std::ostringstream os;
      os << "t,a,F\n";
      for (std::size_t i = 0; i < res.acceleration.size(); ++i) {
        std::snprintf(line, sizeof line, "%.10g,%.17g,%.17g\n", res.time[i], res.acceleration[i], res.field[i]);
        os << line;
      }
      write_text_atomic(out_dir / "dipole.csv", os.str());
    }
    if (res.spectrum) {
      std::ostringstream os;
      os << "omega,omega_over_Up,S\n";
      for (std::size_t i = 0; i < res.spectrum->omega.size(); ++i) {
        std::snprintf(line, sizeof line, "%.10g,%.10g,%.17g\n", res.spectrum->omega[i],
                      res.spectrum->omega_over_up[i], res.spectrum->s[i]);
        os << line;
      }
      write_text_atomic(out_dir / "spectrum.csv", os.str());
    }
    {
      std::ostringstream os;
      os << "t,K,err\n";
      for (std::size_t i = 0; i < res.k_used.size(); ++i) {
        std::snprintf(line, sizeof line, "%.10g,%d,%.6e\n", i * dt, res.k_used[i], res.k_error[i]);
        os << line;
      }
      write_text_atomic(out_dir / "klog.csv", os.str());
    }
    if (sys.filter) write_text_atomic(out_dir / "localization.txt", res.localization);
    const std::string ckpt = n >= total ? "final_state.bin" : "checkpoint.bin";
    write_checkpoint((out_dir / ckpt).string(), make_checkpoint(n));
  }
  res.timings["output"] = seconds_since(t_out);
  res.timings["total"] = seconds_since(t_start);
  res.final_state = psi;

  if (options.write_outputs) {
    nlohmann::json meta;
    nlohmann::json cfg = nlohmann::json::object();
    std::istringstream in(to_text(config));
    std::string l;
    while (std::getline(in, l)) {
      const auto eq = l.find(" = ");
      if (eq != std::string::npos) cfg[l.substr(0, eq)] = l.substr(eq + 3);
    }
    meta["config"] = cfg;
    char fps[20];
    std::snprintf(fps, sizeof fps, "%016llx", static_cast<unsigned long long>(fp));
    meta["fingerprint"] = fps;
    meta["version"] = version();
    meta["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION);
    meta["threads"] = thread_count();
    meta["seed"] = config.seed;
    meta["radial_size"] = grid.size();
    meta["dimension"] = h.dimension();
    meta["nonzeros"] = res.nonzeros;
    meta["steps"] = res.steps;
    meta["completed"] = n >= total;
    meta["ground_energy"] = res.ground_energy;
    meta["final_norm"] = norm(psi);
    meta["final_time"] = psi.t;
    meta["final_radius"] = simulated_radius(grid, current_scale(schedule, psi.t));
    if (!res.k_used.empty()) {
      double mean = 0.0;
      for (int k : res.k_used) mean += k;
      meta["k_max"] = *std::max_element(res.k_used.begin(), res.k_used.end());
      meta["k_mean"] = mean / res.k_used.size();
    }
    if (sys.filter) {
      int truncated = 0;
      for (int l2 = 0; l2 <= h.l_max(); ++l2) truncated += sys.filter->truncated(l2) ? 1 : 0;
      meta["filter"] = {{"window", sys.filter->window()},
                        {"truncated_blocks", truncated},
                        {"removed_states", sys.filter->localization().size()}};
    }
    meta["timings"] = res.timings;
    write_text_atomic(out_dir / "meta.json", meta.dump(2) + "\n");
  }
  return res;
}

std::vector<ScanRow> scan_kmax(const RunConfig& config, int cap) {
  if (config.scan_l_max.empty() || config.scan_dt.empty()) {
    throw ConfigError("scan: empty l_max or dt list");
  }
  const int l_top = *std::max_element(config.scan_l_max.begin(), config.scan_l_max.end());
  System sys = build_system(config, l_top);
  sys.hamiltonian->update_time(0.0);
  std::vector<ScanRow> rows;
  ScanSpec spec;
  spec.trials = config.scan_trials;
  spec.eps = config.eps;
  spec.cap = cap;
  spec.seed = config.seed;
  for (int l : config.scan_l_max) {
    for (double dt : config.scan_dt) {
      ScanRow row;
      row.l_max = l;
      row.dt = dt;
      row.k_max = kmax_scan(*sys.hamiltonian, l, dt, spec);
      row.estimate = estimate_kmax(l, sys.grid->first_node(), dt, config.eps);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace ets
