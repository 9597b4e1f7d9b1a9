#include "ets/error.hpp"
#include "ets/propagator.hpp"
#include "oracle.hpp"
#include "tiny.hpp"

#include <doctest.h>

#include <cmath>

using namespace ets;

namespace {

Eigen::VectorXcd as_eigen(const std::vector<cplx>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<cplx> random_state(std::size_t n, unsigned seed) {
  std::vector<cplx> v(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = cplx(std::sin(seed + 1.7 * i), std::cos(3.1 * i + seed));
    s += std::norm(v[i]);
  }
  for (auto& c : v) c /= std::sqrt(s);
  return v;
}

}  // namespace

TEST_SUITE("propagator") {

TEST_CASE("eigenvector terminates at K = 2 with a pure phase") {
  const auto g = tiny::grid();
  Hamiltonian h(g, 1, tiny::schedule(false), tiny::pulse(Gauge::length));
  h.update_time(0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
  const Eigen::VectorXcd v = es.eigenvectors().col(0);
  std::vector<cplx> psi(v.data(), v.data() + v.size());
  LanczosPropagator prop;
  const StepReport r = prop.step_frozen(h, psi, 0.1);
  CHECK(r.k_used == 2);
  const Eigen::VectorXcd expect = std::exp(cplx(0.0, -es.eigenvalues()(0) * 0.1)) * v;
  CHECK((as_eigen(psi) - expect).norm() < 1e-12);
}

TEST_CASE("single steps match the dense exponential") {
  const auto g = tiny::grid();
  const auto raw = oracle::raw_integrals(*g);
  for (Gauge gauge : {Gauge::length, Gauge::velocity}) {
    Hamiltonian h(g, 2, tiny::schedule(true), tiny::pulse(gauge));
    PropagatorSpec ps;
    ps.eps = 1e-30;
    LanczosPropagator prop(ps);
    auto psi = random_state(h.dimension(), 3);
    for (double t : {0.0, 1.0, 2.5}) {
      const Eigen::VectorXcd start = as_eigen(psi);
      const StepReport r = prop.step(h, psi, t, 0.05);
      const auto ref = oracle::expm_apply(oracle::dense_hamiltonian(tiny::setup_of(h), raw),
                                          start, 0.05);
      CHECK((as_eigen(psi) - ref).norm() < 1e-12);
      CHECK(std::abs(r.norm_after - 1.0) < 1e-12);
      CHECK(r.error_estimate < ps.eps);
      CHECK(h.time() == doctest::Approx(t + 0.025));
    }
  }
}

TEST_CASE("cap on the Krylov dimension") {
  const auto g = tiny::grid();
  Hamiltonian h(g, 2, tiny::schedule(false), tiny::pulse(Gauge::length));
  PropagatorSpec ps;
  ps.eps = 1e-30;
  ps.max_k = 3;
  LanczosPropagator prop(ps);
  auto psi = random_state(h.dimension(), 5);
  CHECK_THROWS_AS(prop.step(h, psi, 0.0, 0.5), StiffnessError);
}

TEST_CASE("norm is preserved over many steps") {
  const auto g = tiny::grid();
  Hamiltonian h(g, 2, tiny::schedule(true), tiny::pulse(Gauge::velocity));
  LanczosPropagator prop;
  auto psi = random_state(h.dimension(), 9);
  double worst = 0.0;
  for (int n = 0; n < 2000; ++n) {
    const StepReport r = prop.step(h, psi, n * 0.01, 0.01);
    worst = std::max(worst, std::abs(r.norm_after - 1.0));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("identical inputs give identical results") {
  const auto g = tiny::grid();
  Hamiltonian h1(g, 2, tiny::schedule(true), tiny::pulse(Gauge::length));
  Hamiltonian h2(g, 2, tiny::schedule(true), tiny::pulse(Gauge::length));
  LanczosPropagator p1, p2;
  auto a = random_state(h1.dimension(), 1), b = a;
  for (int n = 0; n < 50; ++n) {
    const auto r1 = p1.step(h1, a, n * 0.05, 0.05);
    const auto r2 = p2.step(h2, b, n * 0.05, 0.05);
    CHECK(r1.k_used == r2.k_used);
  }
  CHECK(a == b);
}

TEST_CASE("Krylov dimension estimate") {
  CHECK(estimate_kmax(0, 0.06, 0.1, 1e-15) == 2);
  int prev = 0;
  for (int l : {10, 50, 100, 200}) {
    const auto k = estimate_kmax(l, 0.0603, 0.01, 1e-15, 1000000);
    REQUIRE(k.has_value());
    CHECK(*k >= prev);
    prev = *k;
  }
  prev = 0;
  for (double dt : {0.001, 0.002, 0.004}) {
    const auto k = estimate_kmax(100, 0.0603, dt, 1e-15, 1000000);
    REQUIRE(k.has_value());
    CHECK(*k >= prev);
    prev = *k;
  }
  CHECK_FALSE(estimate_kmax(200, 0.0603, 1.0, 1e-15).has_value());
  CHECK_THROWS_AS(estimate_kmax(2, 0.0, 0.1, 1e-15), InvalidSpec);
}

TEST_CASE("random-vector scan") {
  const auto g = std::make_shared<RadialGrid>(GridSpec::uniform(10, 40, 0, 1.5));
  Hamiltonian h(g, 4, ScalingSchedule(), tiny::pulse(Gauge::length));
  ScanSpec s;
  s.trials = 10;
  const int k_small = kmax_scan(h, 0, 0.01, s);
  const int k_large = kmax_scan(h, 0, 0.1, s);
  CHECK(k_small < 40);
  CHECK(k_large < 100);
  CHECK(kmax_scan(h, 0, 0.01, s) == k_small);
  s.cap = 5;
  CHECK(kmax_scan(h, 4, 0.1, s) == 6);
}

}
