#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace ets {

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit norm, largest component positive
  double residual = 0.0;   // ||A x - value x||
};

/// Lowest `count` eigenpairs of a real symmetric sparse matrix, ascending.
///
/// A short Lanczos run places a shift below the low end of the spectrum,
/// then shift-inverted Lanczos (sparse LU) resolves the eigenvalues next to
/// the shift. Small matrices go straight to a dense solver. Throws
/// NumericalError when the residuals do not drop below tol * max(1, |value|).
std::vector<Eigenpair> lowest_eigenpairs(const Eigen::SparseMatrix<double>& a,
                                         int count, double tol = 1e-10);

}  // namespace ets
