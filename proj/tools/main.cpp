// ets: exterior time-scaling TDSE solver for hydrogen.
//
//   ets run <config>
//   ets scan-kmax <config> [--cap N] [--out FILE]
//   ets ground-state <config> [--states N]
//   ets resume <checkpoint> [--output-dir DIR]
//
// Exit codes: 0 success, 2 configuration error, 3 stiffness abort,
// 4 numerical abort. ETS_NUM_THREADS sets the OpenMP thread count.

#include "ets/eigensolver.hpp"
#include "ets/error.hpp"
#include "ets/simulation.hpp"

#include <CLI11.hpp>

#ifdef ETS_HAVE_OPENMP
#include <omp.h>
#endif

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

void apply_thread_env() {
  const char* env = std::getenv("ETS_NUM_THREADS");
  if (!env) return;
  const int n = std::atoi(env);
  if (n < 1) throw ets::ConfigError("ETS_NUM_THREADS must be a positive integer");
#ifdef ETS_HAVE_OPENMP
  omp_set_num_threads(n);
#endif
}

void print_summary(const ets::RunResult& r, const ets::RunConfig& c) {
  int kmax = 0;
  for (int k : r.k_used) kmax = std::max(kmax, k);
  std::printf("steps %ld  t = %.4f  norm = %.15f  K_max = %d  nonzeros = %lld\n",
              r.steps, r.final_state.t, ets::norm(r.final_state), kmax,
              static_cast<long long>(r.nonzeros));
  std::printf("outputs in %s (%.1f s)\n", c.output_dir.c_str(), r.timings.at("total"));
}

int cmd_run(const std::string& path) {
  const auto cfg = ets::load_config(path);
  const auto res = ets::run(cfg);
  print_summary(res, cfg);
  return 0;
}

int cmd_resume(const std::string& path, const std::string& out_dir) {
  const auto ckpt = ets::read_checkpoint(path);
  auto cfg = ets::parse_config(ckpt.config_text);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (ets::fingerprint(cfg) != ckpt.fingerprint) {
    throw ets::ConfigError("resume: checkpoint fingerprint does not match its configuration");
  }
  ets::RunOptions opt;
  opt.resume = &ckpt;
  const auto res = ets::run(cfg, opt);
  print_summary(res, cfg);
  return 0;
}

int cmd_scan(const std::string& path, int cap, const std::string& out) {
  const auto cfg = ets::load_config(path);
  const auto rows = ets::scan_kmax(cfg, cap);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw ets::ConfigError("cannot write " + out);
    file << "l_max,dt,k_max,estimate\n";
  }
  std::printf("%6s %8s %8s %10s\n", "l_max", "dt", "K_max", "estimate");
  for (const auto& r : rows) {
    const std::string k = r.k_max > cap ? ">" + std::to_string(cap) : std::to_string(r.k_max);
    const std::string e = r.estimate ? std::to_string(*r.estimate) : "unbounded";
    std::printf("%6d %8.4f %8s %10s\n", r.l_max, r.dt, k.c_str(), e.c_str());
    if (file) file << r.l_max << "," << r.dt << "," << r.k_max << "," << (r.estimate ? *r.estimate : -1) << "\n";
  }
  std::printf("seed %llu, %d trials\n", static_cast<unsigned long long>(cfg.seed), cfg.scan_trials);
  return 0;
}

int cmd_ground(const std::string& path, int states) {
  const auto cfg = ets::load_config(path);
  auto sys = ets::build_system(cfg, 0);
  sys.hamiltonian->update_time(0.0);
  const auto pairs = ets::lowest_eigenpairs(sys.hamiltonian->diagonal_block(0), states);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double exact = -0.5 / ((i + 1.0) * (i + 1.0));
    std::printf("n=%zu  E = %.12f  (exact %.12f, diff %.3e, residual %.2e)\n", i + 1,
                pairs[i].value, exact, pairs[i].value - exact, pairs[i].residual);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exterior time-scaling TDSE solver for hydrogen in a laser pulse"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, out_dir, scan_out;
  int cap = 1000;
  int states = 3;

  auto* run = app.add_subcommand("run", "propagate from the ground state");
  run->add_option("config", config_path, "configuration file")->required();

  auto* scan = app.add_subcommand("scan-kmax", "random-vector K_max scan");
  scan->add_option("config", config_path, "configuration file")->required();
  scan->add_option("--cap", cap, "largest Krylov dimension tried");
  scan->add_option("--out", scan_out, "CSV output file");

  auto* ground = app.add_subcommand("ground-state", "lowest l = 0 field-free eigenvalues");
  ground->add_option("config", config_path, "configuration file")->required();
  ground->add_option("--states", states, "number of eigenvalues")->check(CLI::PositiveNumber);

  auto* resume = app.add_subcommand("resume", "continue a run from a checkpoint");
  resume->add_option("checkpoint", checkpoint_path, "checkpoint file")->required();
  resume->add_option("--output-dir", out_dir, "override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_thread_env();
    if (*run) return cmd_run(config_path);
    if (*scan) return cmd_scan(config_path, cap, scan_out);
    if (*ground) return cmd_ground(config_path, states);
    if (*resume) return cmd_resume(checkpoint_path, out_dir);
  } catch (const ets::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ets::InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ets::StiffnessError& e) {
    std::cerr << "stiffness abort: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
