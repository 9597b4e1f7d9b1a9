#pragma once

#include <vector>

namespace ets {

/// Dipole coupling g_{l,l'} = sqrt(4pi/3) <Y_l0 | Y_10 | Y_l'0> for m = 0.
///
/// Only |l - l'| = 1 is nonzero; the table stores g_{l,l+1} and answers
/// every other pair on demand.
class AngularCoupling {
 public:
  explicit AngularCoupling(int l_max);

  int l_max() const { return l_max_; }
  double operator()(int l, int lp) const;
  /// g_{l,l+1}; l in [0, l_max).
  double upper(int l) const { return upper_[l]; }

 private:
  int l_max_;
  std::vector<double> upper_;
};

/// Builds the table from the closed form and cross-checks every entry
/// against a polar-angle quadrature of the defining integral (1e-12).
AngularCoupling coupling_table(int l_max);

/// sqrt((2l+1)(2l'+1))/2 * int_{-1}^{1} P_l(x) x P_l'(x) dx evaluated with
/// a Gauss-Lobatto rule that is exact for the polynomial integrand.
double coupling_by_quadrature(int l, int lp);

}  // namespace ets
