#include "ets/hamiltonian.hpp"
#include "ets/propagator.hpp"
#include "ets/stiffness.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace ets;

namespace {

struct Fixture {
  std::shared_ptr<const RadialGrid> grid;
  std::unique_ptr<Hamiltonian> h;
  std::vector<cplx> x, y;
};

// Desk-scale ETS assembly: dx = 1.5, r_sigma = 30, l_max from the argument.
Fixture make(int l_max, Gauge gauge, bool filtered) {
  Fixture f;
  f.grid = std::make_shared<RadialGrid>(GridSpec::uniform(10, 20, 40, 1.5));
  PulseSpec p = PulseSpec::from_lab(800.0, 1e14, 3.0, PulseShape::vector_potential, gauge);
  f.h = std::make_unique<Hamiltonian>(f.grid, l_max, ScalingSchedule(0.02, 300.0), Pulse(p));
  if (filtered) patch(*f.h, make_filter(*f.grid, l_max, gauge, FilterSpec{}));
  f.h->update_time(150.0);
  f.x.assign(f.h->dimension(), cplx(1.0, 0.5));
  f.y.resize(f.h->dimension());
  return f;
}

void BM_apply(benchmark::State& state) {
  auto f = make(static_cast<int>(state.range(0)), state.range(1) ? Gauge::velocity : Gauge::length,
                state.range(2) != 0);
  for (auto _ : state) {
    f.h->apply(f.x, f.y);
    benchmark::DoNotOptimize(f.y.data());
  }
  state.counters["nnz"] = static_cast<double>(f.h->nonzero_count());
  state.SetItemsProcessed(state.iterations() * f.h->nonzero_count());
}
BENCHMARK(BM_apply)
    ->ArgsProduct({{10, 50}, {0, 1}, {0, 1}})
    ->ArgNames({"l_max", "velocity", "filter"})
    ->Unit(benchmark::kMicrosecond);

void BM_update_time(benchmark::State& state) {
  auto f = make(static_cast<int>(state.range(0)), Gauge::velocity, true);
  double t = 100.0;
  for (auto _ : state) {
    f.h->update_time(t);
    t += 0.05;
  }
}
BENCHMARK(BM_update_time)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_lanczos_step(benchmark::State& state) {
  auto f = make(static_cast<int>(state.range(0)), Gauge::velocity, true);
  LanczosPropagator prop;
  double norm2 = 0.0;
  for (const auto& c : f.x) norm2 += std::norm(c);
  for (auto& c : f.x) c /= std::sqrt(norm2);
  double t = 100.0;
  int k = 0;
  for (auto _ : state) {
    k = prop.step(*f.h, std::span<cplx>(f.x), t, 0.05).k_used;
    t += 0.05;
  }
  state.counters["K"] = k;
}
BENCHMARK(BM_lanczos_step)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
