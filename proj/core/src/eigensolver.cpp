#include "ets/eigensolver.hpp"

#include "ets/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace ets {

namespace {

constexpr int kDenseLimit = 1200;

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (v(at) < 0.0) v = -v;
}

// Deterministic start vector with weight on every component.
Eigen::VectorXd start_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + 0.37 * i);
  return v.normalized();
}

// Lanczos with full reorthogonalization on a linear operator; returns the
// basis columns and the tridiagonal coefficients.
template <typename Op>
void lanczos(Op op, Eigen::Index n, int steps, Eigen::MatrixXd& q,
             Eigen::VectorXd& alpha, Eigen::VectorXd& beta) {
  steps = static_cast<int>(std::min<Eigen::Index>(steps, n));
  q.resize(n, steps);
  alpha.resize(steps);
  beta.resize(std::max(steps - 1, 0));
  q.col(0) = start_vector(n);
  int m = steps;
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd w = op(q.col(k));
    alpha(k) = q.col(k).dot(w);
    for (int pass = 0; pass < 2; ++pass) {
      w -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * w);
    }
    if (k + 1 == steps) break;
    const double b = w.norm();
    if (b < 1e-13 * std::abs(alpha(k)) || b == 0.0) {
      m = k + 1;
      break;
    }
    beta(k) = b;
    q.col(k + 1) = w / b;
  }
  if (m < steps) {
    q.conservativeResize(n, m);
    alpha.conservativeResize(m);
    beta.conservativeResize(m - 1);
  }
}

Eigen::SparseMatrix<double> shifted(const Eigen::SparseMatrix<double>& a,
                                    double sigma) {
  Eigen::SparseMatrix<double> id(a.rows(), a.cols());
  id.setIdentity();
  return a - sigma * id;
}

}  // namespace

std::vector<Eigenpair> lowest_eigenpairs(const Eigen::SparseMatrix<double>& a,
                                         int count, double tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || n == 0) throw DimensionError("eigensolver: need a square matrix");
  if (count < 1 || count > n) throw InvalidSpec("eigensolver: bad eigenpair count");

  std::vector<Eigenpair> out;
  if (n <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(a)};
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver: dense solver failed");
    for (int j = 0; j < count; ++j) {
      Eigenpair p;
      p.value = es.eigenvalues()(j);
      p.vector = es.eigenvectors().col(j);
      fix_sign(p.vector);
      p.residual = (a * p.vector - p.value * p.vector).norm();
      out.push_back(std::move(p));
    }
    return out;
  }

  // Rough low end of the spectrum.
  Eigen::MatrixXd q;
  Eigen::VectorXd alpha, beta;
  lanczos([&](const auto& v) -> Eigen::VectorXd { return a * v; }, n, 80, q, alpha, beta);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  tri.computeFromTridiagonal(alpha, beta, Eigen::EigenvaluesOnly);
  double sigma = tri.eigenvalues()(0) - 1.0;

  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(shifted(a, sigma));
    if (lu.info() != Eigen::Success) {
      sigma -= 1e-3 * (1.0 + std::abs(sigma));
      continue;
    }
    const int steps = (4 * count + 40) * (attempt + 1);
    lanczos([&](const auto& v) -> Eigen::VectorXd { return lu.solve(Eigen::VectorXd(v)); },
            n, steps, q, alpha, beta);
    tri.computeFromTridiagonal(alpha, beta, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd& theta = tri.eigenvalues();
    std::vector<Eigenpair> cand;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      if (std::abs(theta(i)) < 1e-300) continue;
      Eigenpair p;
      p.vector = (q * tri.eigenvectors().col(i)).normalized();
      p.value = p.vector.dot(a * p.vector);
      p.residual = (a * p.vector - p.value * p.vector).norm();
      cand.push_back(std::move(p));
    }
    std::sort(cand.begin(), cand.end(),
              [](const Eigenpair& x, const Eigenpair& y) { return x.value < y.value; });
    // Anything below the shift means the shift was not low enough.
    if (!cand.empty() && cand.front().value < sigma &&
        cand.front().residual <= tol * std::max(1.0, std::abs(cand.front().value))) {
      sigma = cand.front().value - 1.0;
      continue;
    }
    bool ok = static_cast<int>(cand.size()) >= count;
    for (int j = 0; ok && j < count; ++j) {
      ok = cand[j].residual <= tol * std::max(1.0, std::abs(cand[j].value));
    }
    if (!ok) continue;
    cand.resize(count);
    for (auto& p : cand) fix_sign(p.vector);
    return cand;
  }
  throw NumericalError("eigensolver: shift-invert Lanczos did not converge for " +
                       std::to_string(count) + " eigenpairs");
}

}  // namespace ets
