#include "ets/error.hpp"
#include "ets/stiffness.hpp"
#include "ets/types.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace ets;

namespace {

const RadialGrid& box60() {
  static const RadialGrid g(GridSpec::uniform(10, 40, 0, 1.5));
  return g;
}

}  // namespace

TEST_SUITE("stiffness") {

TEST_CASE("window size") {
  CHECK(filter_window(10, 10) == 89);
  CHECK(filter_window(5, 2) == 7);
  CHECK_THROWS_AS(inner_blocks(box60(), 2, 41), InvalidSpec);
  CHECK_THROWS_AS(inner_blocks(box60(), 2, 0), InvalidSpec);
}

TEST_CASE("largest eigenvalue grows with the centrifugal term at the first node") {
  const auto h = inner_blocks(box60(), 200, 10);
  REQUIRE(h[200].rows() == 89);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h[200], Eigen::EigenvaluesOnly);
  const double ratio = es.eigenvalues().maxCoeff() / (200.0 * 201.0);
  CHECK(std::abs(ratio / 137.28 - 1.0) < 0.01);
}

TEST_CASE("cut above the whole spectrum leaves the block unchanged") {
  const auto blocks = inner_blocks(box60(), 3, 10);
  const auto w = coupling_blocks(box60(), AngularCoupling(3), Gauge::length, 10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks[0], Eigen::EigenvaluesOnly);
  auto f = build_filter(blocks, es.eigenvalues().maxCoeff() + 1.0, w, Gauge::length, 10, 10);
  CHECK_FALSE(f->truncated(0));
  CHECK((f->reduced_block(0) - blocks[0]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("filtered blocks are bounded by the cut and annihilate removed states") {
  const int l_max = 60;
  auto f = make_filter(box60(), l_max, Gauge::velocity, FilterSpec{10, 900.0, 0.1});
  const auto blocks = inner_blocks(box60(), l_max, 10);
  CHECK_FALSE(f->truncated(0));
  CHECK(f->truncated(l_max));
  for (int l : {5, 20, 60}) {
    if (!f->truncated(l)) continue;
    const Eigen::MatrixXd& ht = f->reduced_block(l);
    CHECK((ht - ht.transpose()).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ht, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().maxCoeff() <= 900.0 + 1e-8);
    const Eigen::MatrixXd& u = f->eigenvectors(l);
    for (int n = f->retained(l); n < u.cols(); ++n) {
      CHECK((ht * u.col(n)).norm() < 1e-9 * f->eigenvalues(l)(n));
      const Eigen::VectorXcd un = u.col(n).cast<cplx>();
      CHECK((f->reduced_coupling(l - 1) * un).norm() < 1e-9);
      if (l < l_max) CHECK((f->reduced_coupling(l).adjoint() * un).norm() < 1e-9);
    }
    // Retained eigenpairs are untouched.
    const int k = f->retained(l) - 1;
    CHECK((ht * u.col(k) - f->eigenvalues(l)(k) * u.col(k)).norm() < 1e-9 * 900.0);
    CHECK((blocks[l] * u.col(k) - ht * u.col(k)).norm() < 1e-9 * 900.0);
  }
}

TEST_CASE("removed states sit near the nucleus") {
  auto f = make_filter(box60(), 200, Gauge::length, FilterSpec{10, 900.0, 0.1});
  CHECK(f->localization_ok());
  CHECK_FALSE(f->localization().empty());
  double worst = 0.0;
  for (const auto& e : f->localization()) {
    CHECK(e.energy > 900.0);
    CHECK(e.edge_fraction >= 0.0);
    CHECK(e.edge_fraction <= 1.0);
    worst = std::max(worst, e.edge_fraction);
  }
  CHECK(worst < 0.1);
  const std::string report = f->localization_report();
  CHECK(report.find("edge_fraction") != std::string::npos);
}

TEST_CASE("delocalized removed states are a hard error") {
  CHECK_THROWS_AS(make_filter(box60(), 20, Gauge::length, FilterSpec{10, 900.0, 1e-300}),
                  StiffnessError);
  CHECK_NOTHROW(make_filter(box60(), 20, Gauge::length, FilterSpec{10, 900.0, 1e-300}, false));
}

TEST_CASE("mismatched inputs") {
  const auto blocks = inner_blocks(box60(), 2, 10);
  auto w = coupling_blocks(box60(), AngularCoupling(2), Gauge::length, 10);
  w.pop_back();
  CHECK_THROWS_AS(build_filter(blocks, 900.0, w, Gauge::length, 10, 10), DimensionError);
  const auto w2 = coupling_blocks(box60(), AngularCoupling(2), Gauge::length, 10);
  CHECK_THROWS_AS(build_filter(blocks, 900.0, w2, Gauge::length, 10, 9), DimensionError);
}

}
