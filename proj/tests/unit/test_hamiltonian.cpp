#include "ets/error.hpp"
#include "ets/hamiltonian.hpp"
#include "ets/stiffness.hpp"
#include "oracle.hpp"
#include "tiny.hpp"

#include <doctest.h>

#include <cmath>

using namespace ets;

namespace {

double rel_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("atomic potential") {
  CHECK(atomic_potential(0, 2.0) == -0.5);
  CHECK(atomic_potential(2, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("dense operator matches the reference in both gauges, scaled and not") {
  const auto g = tiny::grid();
  const auto raw = oracle::raw_integrals(*g);
  for (Gauge gauge : {Gauge::length, Gauge::velocity}) {
    for (bool scaled : {false, true}) {
      CAPTURE(static_cast<int>(gauge));
      CAPTURE(scaled);
      Hamiltonian h(g, 2, tiny::schedule(scaled), tiny::pulse(gauge));
      for (double t : {0.0, 1.3, 3.7, 6.2}) {
        h.update_time(t);
        const Eigen::MatrixXcd d = h.to_dense();
        CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * d.cwiseAbs().maxCoeff());
        CHECK(rel_diff(d, oracle::dense_hamiltonian(tiny::setup_of(h), raw)) < 1e-10);
      }
      if (scaled) CHECK(h.scale_state().R > 1.5);
    }
  }
}

TEST_CASE("global scaling limit") {
  const auto g = std::make_shared<RadialGrid>(GridSpec::uniform(5, 0, 3, 2.0));
  const auto raw = oracle::raw_integrals(*g);
  Hamiltonian h(g, 1, ScalingSchedule(0.3, 4.0), tiny::pulse(Gauge::velocity));
  h.update_time(2.5);
  const Eigen::MatrixXcd d = h.to_dense();
  CHECK(rel_diff(d, oracle::dense_hamiltonian(tiny::setup_of(h), raw)) < 1e-10);
  CHECK_THROWS_AS(make_filter(*g, 1, Gauge::velocity, FilterSpec{1, 10.0, 0.1}), InvalidSpec);
}

TEST_CASE("filtered operator matches the reference projection") {
  const auto g = tiny::grid();
  const auto raw = oracle::raw_integrals(*g);
  for (Gauge gauge : {Gauge::length, Gauge::velocity}) {
    Hamiltonian h(g, 2, tiny::schedule(true), tiny::pulse(gauge));
    FilterSpec fs{2, 21.7, 1.0};
    auto f = make_filter(*g, 2, gauge, fs, false);
    int cut = 0;
    for (int l = 0; l <= 2; ++l) cut += f->truncated(l);
    REQUIRE(cut > 0);
    REQUIRE(cut < 3);
    patch(h, f);
    for (double t : {0.7, 3.1}) {
      h.update_time(t);
      const Eigen::MatrixXcd d = h.to_dense();
      CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * d.cwiseAbs().maxCoeff());
      const auto ref = oracle::filtered_hamiltonian(tiny::setup_of(h), raw, f->window(), 21.7);
      CHECK(rel_diff(d, ref) < 1e-10);
    }
    // Patching twice is the same as patching once.
    const Eigen::MatrixXcd once = h.to_dense();
    patch(h, f);
    CHECK(rel_diff(h.to_dense(), once) == 0.0);
    h.attach_filter(nullptr);
    CHECK(rel_diff(h.to_dense(), oracle::dense_hamiltonian(tiny::setup_of(h), raw)) < 1e-10);
  }
}

TEST_CASE("fewer blocks apply the leading sub-operator") {
  const auto g = tiny::grid();
  Hamiltonian h(g, 3, tiny::schedule(true), tiny::pulse(Gauge::velocity));
  h.update_time(2.0);
  const Eigen::MatrixXcd full = h.to_dense();
  const Eigen::MatrixXcd lead = h.to_dense(2);
  const int m = 2 * h.radial_size();
  CHECK((lead - full.topLeftCorner(m, m)).cwiseAbs().maxCoeff() == 0.0);
  std::vector<cplx> x(5), y(5);
  CHECK_THROWS_AS(h.apply(x, y), DimensionError);
}

TEST_CASE("field-free operator is block diagonal") {
  const auto g = tiny::grid();
  Hamiltonian h(g, 2, tiny::schedule(false), tiny::pulse(Gauge::length));
  h.update_time(0.0);
  const Eigen::MatrixXcd d = h.to_dense();
  const int n = h.radial_size();
  CHECK(d.block(0, n, n, n).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd blk = Eigen::MatrixXd(h.diagonal_block(1));
  CHECK((blk.cast<cplx>() - d.block(n, n, n, n)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nonzero counts of the filtered velocity-gauge matrices") {
  Pulse p(PulseSpec::from_lab(3000.0, 1e14, 3.0, PulseShape::vector_potential, Gauge::velocity));
  FilterSpec fs{10, 900.0, 0.1};

  const auto ets_grid = std::make_shared<RadialGrid>(GridSpec::uniform(10, 20, 280, 1.5));
  Hamiltonian ets_h(ets_grid, 200, ScalingSchedule(0.01, p.duration()), p);
  patch(ets_h, make_filter(*ets_grid, 200, Gauge::velocity, fs));
  CHECK(ets_h.nonzero_count() == 21987359);

  const auto box = std::make_shared<RadialGrid>(GridSpec::uniform(10, 2000, 0, 1.5));
  Hamiltonian box_h(box, 200, ScalingSchedule(), p);
  patch(box_h, make_filter(*box, 200, Gauge::velocity, fs));
  CHECK(box_h.nonzero_count() == 123135659);
}

}
