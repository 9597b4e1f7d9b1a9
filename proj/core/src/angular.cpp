#include "ets/angular.hpp"

#include "ets/error.hpp"
#include "ets/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace ets {

namespace {
double legendre(int l, double x) {
  double p0 = 1.0;
  if (l == 0) return p0;
  double p1 = x;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}
}  // namespace

AngularCoupling::AngularCoupling(int l_max) : l_max_(l_max) {
  if (l_max < 0) throw InvalidSpec("angular: l_max must be >= 0");
  upper_.resize(l_max);
  for (int l = 0; l < l_max; ++l) {
    upper_[l] = (l + 1.0) / std::sqrt((2.0 * l + 1.0) * (2.0 * l + 3.0));
  }
}

double AngularCoupling::operator()(int l, int lp) const {
  if (l < 0 || lp < 0 || l > l_max_ || lp > l_max_) return 0.0;
  if (lp == l + 1) return upper_[l];
  if (l == lp + 1) return upper_[lp];
  return 0.0;
}

double coupling_by_quadrature(int l, int lp) {
  // Integrand degree is l + lp + 1; Lobatto with n points is exact to 2n-3.
  const int n = std::max(3, (l + lp + 4) / 2 + 2);
  const auto rule = lobatto_rule(n, -1.0, 1.0);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = rule.nodes[k];
    sum += rule.weights[k] * legendre(l, x) * x * legendre(lp, x);
  }
  return 0.5 * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0)) * sum;
}

AngularCoupling coupling_table(int l_max) {
  AngularCoupling table(l_max);
  for (int l = 0; l < l_max; ++l) {
    const double q = coupling_by_quadrature(l, l + 1);
    if (std::abs(q - table.upper(l)) > 1e-12) {
      throw NumericalError("angular: closed form disagrees with quadrature at l = " +
                           std::to_string(l));
    }
  }
  return table;
}

}  // namespace ets
