#include "ets/angular.hpp"

#include <doctest.h>

#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

using namespace ets;

namespace {

// sqrt(4 pi / 3) int Y_l0 Y_10 Y_l'0 dOmega by Gauss-Legendre in cos(theta).
double spherical_oracle(int l, int lp) {
  auto f = [&](double x) {
    const double th = std::acos(x);
    return boost::math::spherical_harmonic_r(l, 0, th, 0.0) *
           boost::math::spherical_harmonic_r(1, 0, th, 0.0) *
           boost::math::spherical_harmonic_r(lp, 0, th, 0.0);
  };
  const double s = boost::math::quadrature::gauss<double, 60>::integrate(f, -1.0, 1.0);
  return std::sqrt(4.0 * M_PI / 3.0) * 2.0 * M_PI * s;
}

}  // namespace

TEST_SUITE("angular") {

TEST_CASE("low-order couplings") {
  const auto g = coupling_table(5);
  CHECK(g(0, 1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(g(1, 2) == doctest::Approx(2.0 / std::sqrt(15.0)).epsilon(1e-14));
  CHECK(g(0, 1) == doctest::Approx(spherical_oracle(0, 1)).epsilon(1e-12));
  CHECK(g(1, 2) == doctest::Approx(spherical_oracle(1, 2)).epsilon(1e-12));
  CHECK(g(3, 4) == doctest::Approx(spherical_oracle(3, 4)).epsilon(1e-12));
}

TEST_CASE("selection rule and symmetry") {
  const AngularCoupling g(40);
  for (int l = 0; l <= 40; ++l) {
    for (int lp = 0; lp <= 40; ++lp) {
      if (std::abs(l - lp) != 1) CHECK(g(l, lp) == 0.0);
      CHECK(g(l, lp) == g(lp, l));
    }
  }
}

TEST_CASE("couplings decrease towards one half") {
  const AngularCoupling g(300);
  for (int l = 0; l < 299; ++l) {
    CHECK(g.upper(l) > 0.5);
    CHECK(g.upper(l) < 1.0);
    CHECK(g.upper(l + 1) < g.upper(l));
  }
}

TEST_CASE("closed form agrees with polar quadrature") {
  for (int l = 0; l < 60; ++l) {
    CHECK(coupling_by_quadrature(l, l + 1) ==
          doctest::Approx(AngularCoupling(60).upper(l)).epsilon(1e-12));
  }
  CHECK(std::abs(coupling_by_quadrature(2, 2)) < 1e-14);
  CHECK_NOTHROW(coupling_table(200));
}

}
