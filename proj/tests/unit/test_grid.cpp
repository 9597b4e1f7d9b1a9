#include "ets/error.hpp"
#include "ets/grid.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace ets;

TEST_SUITE("grid") {

TEST_CASE("two-point rule is the trapezoid") {
  const auto r = lobatto_rule(2, 0.0, 1.0);
  CHECK(r.nodes[0] == 0.0);
  CHECK(r.nodes[1] == 1.0);
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("three-point rule on [-1, 1]") {
  const auto r = lobatto_rule(3, -1.0, 1.0);
  CHECK(r.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.weights[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(r.weights[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("rule integrates polynomials up to degree 2n-3 exactly") {
  for (int n = 2; n <= 14; ++n) {
    const auto r = lobatto_rule(n, 0.0, 2.0);
    double wsum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d <= 2 * n - 3; ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact = std::pow(2.0, d + 1) / (d + 1);
      CHECK(std::abs(s - exact) <= 1e-12 * exact);
    }
  }
}

TEST_CASE("first interior node of the ten-point rule") {
  const auto r = lobatto_rule(10, 0.0, 1.5);
  CHECK(r.nodes[1] == doctest::Approx(0.06035).epsilon(1e-3));
  const double b = 1.0 / (2.0 * r.nodes[1] * r.nodes[1]);
  CHECK(std::abs(b / 137.28 - 1.0) < 1e-3);
}

TEST_CASE("invalid rules and specs are rejected") {
  CHECK_THROWS_AS(lobatto_rule(1, 0.0, 1.0), InvalidSpec);
  CHECK_THROWS_AS(lobatto_rule(4, 1.0, 1.0), InvalidSpec);
  GridSpec s = GridSpec::uniform(10, 2, 2, 1.5);
  s.r_sigma = 2.0;
  CHECK_THROWS_AS(build_grid(s), InvalidSpec);
  CHECK_THROWS_AS(build_grid(GridSpec::uniform(1, 2, 2, 1.5)), InvalidSpec);
  CHECK_THROWS_AS(build_grid(GridSpec::uniform(5, 0, 0, 1.5)), InvalidSpec);
}

TEST_CASE("basis sizes and classes") {
  const RadialGrid big(GridSpec::uniform(10, 20, 280, 1.5));
  CHECK(big.size() == 2699);
  CHECK(big.spec().xi_max == doctest::Approx(450.0));
  REQUIRE(big.bridge_index().has_value());
  CHECK(*big.bridge_index() == 179);
  CHECK(big.nodes()[179] == doctest::Approx(30.0).epsilon(1e-14));
  CHECK(big.basis_class(178) == BasisClass::inner);
  CHECK(big.basis_class(180) == BasisClass::outer);

  const RadialGrid smallest(GridSpec::uniform(2, 1, 1, 1.0));
  CHECK(smallest.size() == 1);
  CHECK(smallest.basis_class(0) == BasisClass::bridge);

  const RadialGrid box(GridSpec::uniform(10, 40, 0, 1.5));
  CHECK(box.size() == 359);
  CHECK_FALSE(box.bridge_index().has_value());
  CHECK(box.basis_class(358) == BasisClass::inner);
  CHECK(box.nodes().back() < 60.0);
  CHECK(box.nodes().front() > 0.0);

  const RadialGrid global(GridSpec::uniform(6, 0, 4, 2.0));
  CHECK_FALSE(global.bridge_index().has_value());
  for (auto c : global.classes()) CHECK(c == BasisClass::outer);
}

TEST_CASE("functions are cardinal at the nodes") {
  const RadialGrid g(GridSpec::uniform(6, 2, 2, 2.0));
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      const double v = g.evaluate(i, g.nodes()[j]) * std::sqrt(g.weights()[i]);
      CHECK(v == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("integral matrices match an independent quadrature") {
  const RadialGrid g(GridSpec::uniform(7, 3, 2, 1.7));
  const auto raw = oracle::raw_integrals(g);
  const Eigen::MatrixXd k = g.kinetic_integrals();
  const Eigen::MatrixXd a = g.antisym_integrals();
  CHECK((k - raw.kin_in - raw.kin_out).cwiseAbs().maxCoeff() < 1e-10 * k.cwiseAbs().maxCoeff());
  CHECK((a - raw.der_in - raw.der_out).cwiseAbs().maxCoeff() < 1e-10 * a.cwiseAbs().maxCoeff());
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a + a.transpose()).cwiseAbs().maxCoeff() < 1e-13);

  // Inner-outer entries vanish except through the bridge.
  const int b = *g.bridge_index();
  for (int i = 0; i < b; ++i) {
    for (int j = b + 1; j < g.size(); ++j) CHECK(k(i, j) == 0.0);
  }
  // The bridge self-integral splits equally between the two sides.
  CHECK(2.0 * raw.kin_in(b, b) == doctest::Approx(k(b, b)).epsilon(1e-10));
}

TEST_CASE("quadrature_diag") {
  const RadialGrid g(GridSpec::uniform(5, 2, 2, 2.0));
  for (double v : quadrature_diag(g, [](double) { return 1.0; })) CHECK(v == 1.0);
  const auto x = quadrature_diag(g, [](double xi) { return xi; });
  for (int k = 0; k < g.size(); ++k) CHECK(x[k] == g.nodes()[k]);
  const double bad = g.nodes()[3];
  CHECK_THROWS_AS(quadrature_diag(g, [bad](double xi) { return 1.0 / (xi - bad); }),
                  NumericalError);

  // Lobatto sum of chi_b f chi_b over the inner element gives f(r_sigma)/2.
  const int b = *g.bridge_index();
  const Element& el = g.element(g.spec().n_fe_inner - 1);
  auto f = [](double xi) { return 3.0 + 0.5 * xi; };
  double s = 0.0;
  for (int i = 0; i < static_cast<int>(el.nodes.size()); ++i) {
    const double chi = g.evaluate(b, el.nodes[i]);
    s += el.weights[i] * chi * f(el.nodes[i]) * chi;
  }
  CHECK(s == doctest::Approx(0.5 * f(g.spec().r_sigma)).epsilon(1e-12));
}

TEST_CASE("interpolation reproduces smooth functions") {
  const RadialGrid g(GridSpec::uniform(12, 4, 4, 2.5));
  std::vector<double> c(g.size());
  auto f = [](double r) { return r * std::exp(-r); };
  for (int k = 0; k < g.size(); ++k) c[k] = f(g.nodes()[k]) * std::sqrt(g.weights()[k]);
  for (double r = 0.05; r < 19.9; r += 0.37) {
    CHECK(g.interpolate(c.data(), r) == doctest::Approx(f(r)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(g.element_of(-1.0), DomainError);
  CHECK_THROWS_AS(g.element_of(21.0), DomainError);
}

}
