#include "ets/eigensolver.hpp"
#include "ets/error.hpp"
#include "ets/simulation.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace ets;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"(
# small ETS run
xi_max = 40
n_dvr = 10
n_fe_inner = 10
n_fe_outer = 10
l_max = 3
wavelength_nm = 800
cycles = 0.25
r_inf = 0.05
dt = 0.1
hhg_points = 50
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ets_driver_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig base(const std::string& extra = "") { return parse_config(std::string(kBase) + extra); }

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("config parsing") {
  const RunConfig c = base();
  CHECK(c.grid.r_sigma == doctest::Approx(20.0));
  CHECK(c.total_cycles == c.cycles);
  CHECK(c.gauge == Gauge::length);
  CHECK(c.l_max == 3);
  CHECK(c.total_steps() == std::lround(0.25 * 2.0 * std::numbers::pi / c.pulse_spec().omega / 0.1));

  const RunConfig again = parse_config(to_text(c));
  CHECK(to_text(again) == to_text(c));
  CHECK(fingerprint(again) == fingerprint(c));
  CHECK(fingerprint(base("output_dir = elsewhere\n")) == fingerprint(c));
  CHECK(fingerprint(base("gauge = velocity\n")) != fingerprint(c));

  CHECK_THROWS_AS(base("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(base("l_max = 4\n"), ConfigError);
  CHECK_THROWS_AS(base("dt = fast\n"), ConfigError);
  CHECK_THROWS_AS(base("dt = -1\n"), ConfigError);
  CHECK_THROWS_AS(base("r_sigma = 21\n"), ConfigError);
  CHECK_NOTHROW(base("r_sigma = 20\n"));
  CHECK_THROWS_AS(base("filter = on\nfilter_n_fe = 11\n"), ConfigError);
  CHECK_THROWS_AS(base("total_cycles = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(base("snapshot_cycles = 0, 5\n"), ConfigError);
  CHECK_THROWS_AS(base("gauge = velocity\npulse_shape = field\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("xi_max = 40\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("ground state energies") {
  const RunConfig c = base("intensity_wcm2 = 0\n");
  System s = build_system(c);
  double e0 = 0.0;
  const StateVector psi = ground_state(*s.hamiltonian, &e0);
  CHECK(e0 == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(block_norms_squared(psi)[1] == 0.0);
  const auto pairs = lowest_eigenpairs(s.hamiltonian->diagonal_block(0), 2);
  CHECK(pairs[1].value == doctest::Approx(-0.125).epsilon(1e-6));
  const auto p1 = lowest_eigenpairs(s.hamiltonian->diagonal_block(1), 1);
  CHECK(p1[0].value == doctest::Approx(-0.125).epsilon(1e-6));
}

TEST_CASE("checkpoint round trip") {
  const fs::path dir = scratch("ckpt");
  fs::create_directories(dir);
  Checkpoint c;
  c.config_text = to_text(base());
  c.fingerprint = fingerprint(base());
  c.step = 17;
  c.state = StateVector(1, 3, 1.7);
  c.state.coeffs = {1.0, cplx(0, 1), 2.0, cplx(-3, 0.5), 0.0, 1e-300};
  c.acceleration = {0.1, 0.2};
  c.field = {0.0, 0.01};
  c.k_used = {5};
  c.k_error = {1e-17};
  write_checkpoint((dir / "a.bin").string(), c);
  const Checkpoint r = read_checkpoint((dir / "a.bin").string());
  CHECK(r.config_text == c.config_text);
  CHECK(r.fingerprint == c.fingerprint);
  CHECK(r.step == 17);
  CHECK(r.state.coeffs == c.state.coeffs);
  CHECK(r.state.t == c.state.t);
  CHECK(r.acceleration == c.acceleration);
  CHECK(r.field == c.field);
  CHECK(r.k_used == c.k_used);
  CHECK(r.k_error == c.k_error);

  std::ofstream((dir / "junk.bin").string()) << "not a checkpoint\n";
  CHECK_THROWS_AS(read_checkpoint((dir / "junk.bin").string()), ConfigError);
  CHECK_THROWS_AS(read_checkpoint((dir / "missing.bin").string()), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("resumed run is bit-identical") {
  const fs::path dir = scratch("resume");
  RunConfig c = base("snapshot_cycles = 0, 0.125, 0.25\n");
  c.output_dir = (dir / "full").string();
  const RunResult full = run(c);

  RunConfig part = c;
  part.output_dir = (dir / "part").string();
  RunOptions first;
  first.stop_after = 100;
  const RunResult head = run(part, first);
  CHECK(head.steps == 100);
  CHECK(fs::exists(dir / "part" / "checkpoint.bin"));
  const Checkpoint ck = read_checkpoint((dir / "part" / "checkpoint.bin").string());
  CHECK(ck.step == 100);

  RunOptions second;
  second.resume = &ck;
  const RunResult tail = run(part, second);
  CHECK(tail.steps == full.steps);
  CHECK(tail.final_state.coeffs == full.final_state.coeffs);
  CHECK(tail.acceleration == full.acceleration);
  CHECK(tail.k_used == full.k_used);

  RunConfig other = part;
  other.intensity_wcm2 = 2e14;
  CHECK_THROWS_AS(run(other, second), ConfigError);

  for (const char* f : {"dipole.csv", "spectrum.csv", "klog.csv", "meta.json", "final_state.bin"}) {
    CHECK_MESSAGE(fs::exists(dir / "full" / f), f);
  }
  int densities = 0;
  for (const auto& e : fs::directory_iterator(dir / "full")) {
    if (e.path().filename().string().rfind("density_", 0) == 0) ++densities;
  }
  CHECK(densities == 3);
  REQUIRE(full.spectrum.has_value());
  CHECK(full.spectrum->s.size() == 50);
  CHECK(full.snapshots.size() == 3);
  fs::remove_all(dir);
}

TEST_CASE("field-free propagation keeps the ground state") {
  RunConfig c = base("intensity_wcm2 = 0\ntotal_cycles = 1\n");
  RunOptions o;
  o.write_outputs = false;
  const RunResult r = run(c, o);
  System s = build_system(c);
  const StateVector psi0 = ground_state(*s.hamiltonian);
  cplx overlap{};
  for (std::size_t i = 0; i < psi0.size(); ++i) {
    overlap += std::conj(psi0.coeffs[i]) * r.final_state.coeffs[i];
  }
  CHECK(1.0 - std::abs(overlap) < 1e-10);
  const double phase = std::arg(overlap);
  const double expect = std::remainder(0.5 * r.steps * c.dt, 2.0 * std::numbers::pi);
  CHECK(std::abs(std::remainder(phase - expect, 2.0 * std::numbers::pi)) < 1e-6);
}

TEST_CASE("repeated runs agree exactly") {
  RunConfig c = base("gauge = velocity\n");
  RunOptions o;
  o.write_outputs = false;
  const RunResult a = run(c, o);
  const RunResult b = run(c, o);
  CHECK(a.final_state.coeffs == b.final_state.coeffs);
  CHECK(a.acceleration == b.acceleration);
  CHECK(std::abs(norm(a.final_state) - 1.0) < 1e-10);
}

TEST_CASE("scan rows") {
  RunConfig c = base("scan_l_max = 0, 3\nscan_dt = 0.01, 0.1\nscan_trials = 3\n");
  const auto rows = scan_kmax(c, 200);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].l_max == 0);
  CHECK(rows[0].dt == 0.01);
  for (const auto& r : rows) {
    CHECK(r.k_max >= 2);
    CHECK(r.k_max <= 201);
  }
}

}
