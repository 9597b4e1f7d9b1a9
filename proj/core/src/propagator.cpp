#include "ets/propagator.hpp"

#include "ets/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace ets {

namespace {

double dot_re(const cplx* a, const cplx* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  cplx s{};
  for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
  return std::sqrt(s);
}

// log of beta_1 ... beta_m dt^m / m! for the stored betas.
double log_error_product(double log_beta_sum, int m, double dt) {
  return log_beta_sum + m * std::log(dt) - std::lgamma(m + 1.0);
}

}  // namespace

LanczosPropagator::LanczosPropagator(PropagatorSpec spec) : spec_(spec) {
  if (!(spec_.eps > 0.0)) throw InvalidSpec("propagator: eps must be > 0");
  if (spec_.max_k < 2) throw InvalidSpec("propagator: max_k must be >= 2");
}

StepReport LanczosPropagator::step(Hamiltonian& h, std::span<cplx> psi,
                                   double t, double dt) {
  h.update_time(t + 0.5 * dt);
  return step_frozen(h, psi, dt);
}

StepReport LanczosPropagator::step(Hamiltonian& h, StateVector& psi, double dt) {
  const StepReport r = step(h, std::span<cplx>(psi.coeffs), psi.t, dt);
  psi.t += dt;
  return r;
}

StepReport LanczosPropagator::step_frozen(const Hamiltonian& h,
                                          std::span<cplx> psi, double dt) {
  if (!(dt > 0.0)) throw InvalidSpec("propagator: dt must be > 0");
  const std::size_t n = psi.size();
  StepReport report;
  const double beta0 = norm2(psi.data(), n);
  if (!std::isfinite(beta0)) throw NumericalError("propagator: non-finite state");
  if (beta0 == 0.0) return report;

  const double log_eps = std::log(spec_.eps);
  const double eps_mach = std::numeric_limits<double>::epsilon();
  const double omega_floor = eps_mach * std::sqrt(static_cast<double>(n));

  auto vec = [&](int k) -> std::vector<cplx>& {
    if (static_cast<int>(basis_.size()) <= k) basis_.resize(k + 1);
    basis_[k].resize(n);
    return basis_[k];
  };
  work_.resize(n);

  {
    auto& q0 = vec(0);
    for (std::size_t i = 0; i < n; ++i) q0[i] = psi[i] / beta0;
  }

  std::vector<double> alpha, beta;
  std::vector<double> omega_prev, omega_cur{1.0}, omega_next;
  double log_beta_sum = 0.0;
  int target = -1;  // number of Lanczos vectors once the criterion holds
  bool force_reorth = false;

  for (int k = 0;; ++k) {
    const auto& qk = basis_[k];
    h.apply(std::span<const cplx>(qk), std::span<cplx>(work_));
    const double hq_norm = norm2(work_.data(), n);
    const double a = dot_re(qk.data(), work_.data(), n);
    if (!std::isfinite(a)) throw NumericalError("propagator: non-finite Lanczos coefficient");
    alpha.push_back(a);
    if (k + 1 == target) break;

    for (std::size_t i = 0; i < n; ++i) work_[i] -= a * qk[i];
    if (k > 0) {
      const auto& qp = basis_[k - 1];
      const double b = beta[k - 1];
      for (std::size_t i = 0; i < n; ++i) work_[i] -= b * qp[i];
    }
    double b = norm2(work_.data(), n);
    if (!std::isfinite(b)) throw NumericalError("propagator: non-finite Lanczos coefficient");

    if (b <= 1e-14 * hq_norm) {
      // Exact invariant subspace: the error product vanishes.
      report.breakdown = true;
      report.k_used = k + 2;
      report.error_estimate = 0.0;
      break;
    }

    // Simon recurrence for the overlaps of the next vector.
    omega_next.assign(k + 2, 0.0);
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      double v = beta[j] * omega_cur[j + 1] + (alpha[j] - a) * omega_cur[j];
      if (j > 0) v += beta[j - 1] * omega_cur[j - 1];
      if (k > 0) v -= beta[k - 1] * omega_prev[j];
      v /= b;
      v += std::copysign(eps_mach * (beta[j] + b), v);
      omega_next[j] = v;
      worst = std::max(worst, std::abs(v));
    }
    omega_next[k] = omega_floor;
    omega_next[k + 1] = 1.0;

    if (force_reorth || worst > spec_.ortho_tolerance) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j <= k; ++j) {
          const auto& qj = basis_[j];
          const cplx c = dot(qj.data(), work_.data(), n);
          for (std::size_t i = 0; i < n; ++i) work_[i] -= c * qj[i];
        }
      }
      b = norm2(work_.data(), n);
      for (int j = 0; j <= k; ++j) omega_next[j] = omega_floor;
      report.reorthogonalized = true;
      // Simon: the following vector needs it as well.
      force_reorth = !force_reorth;
    }

    beta.push_back(b);
    log_beta_sum += std::log(b);
    auto& qn = vec(k + 1);
    for (std::size_t i = 0; i < n; ++i) qn[i] = work_[i] / b;
    omega_prev = std::move(omega_cur);
    omega_cur = std::move(omega_next);

    const double log_p = log_error_product(log_beta_sum, k + 1, dt);
    if (2.0 * log_p < log_eps) {
      target = k + 2;
      report.k_used = target;
      report.error_estimate = std::exp(2.0 * log_p);
    } else if (k + 2 >= spec_.max_k) {
      throw StiffnessError("propagator: K reached max_k = " +
                           std::to_string(spec_.max_k) +
                           " with error estimate " +
                           std::to_string(std::exp(2.0 * log_p)) + " > eps = " +
                           std::to_string(spec_.eps));
    }
  }

  const int m = static_cast<int>(alpha.size());
  Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int j = 0; j + 1 < m; ++j) sub(j) = beta[j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw NumericalError("propagator: tridiagonal eigensolver failed");
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::VectorXcd coef = Eigen::VectorXcd::Zero(m);
  for (int i = 0; i < m; ++i) {
    const cplx phase = std::exp(cplx(0.0, -lam(i) * dt)) * (beta0 * v(0, i));
    for (int j = 0; j < m; ++j) coef(j) += v(j, i) * phase;
  }

  std::fill(psi.begin(), psi.end(), cplx{});
  for (int j = 0; j < m; ++j) {
    const auto& qj = basis_[j];
    const cplx c = coef(j);
    for (std::size_t i = 0; i < n; ++i) psi[i] += c * qj[i];
  }
  report.norm_after = norm2(psi.data(), n);
  if (!std::isfinite(report.norm_after)) {
    throw NumericalError("propagator: non-finite state after step");
  }
  return report;
}

std::optional<int> estimate_kmax(int l_max, double xi1, double dt, double eps,
                                 int limit) {
  if (l_max < 0 || !(xi1 > 0.0) || !(dt > 0.0) || !(eps > 0.0)) {
    throw InvalidSpec("estimate_kmax: inputs must be positive");
  }
  const double b = l_max * (l_max + 1.0) / (2.0 * xi1 * xi1);
  for (int k = 2; k <= limit; ++k) {
    const double m = k - 1.0;
    const double rhs = std::numbers::e *
                       std::pow(2.0 * std::numbers::pi * m * eps, -1.0 / (2.0 * m)) * b;
    if (m / dt > rhs) return k;
  }
  return std::nullopt;
}

int kmax_scan(const Hamiltonian& h, int l_max, double dt, const ScanSpec& spec) {
  if (l_max < 0 || l_max > h.l_max()) {
    throw DimensionError("kmax_scan: l_max outside the assembly");
  }
  if (!(dt > 0.0) || spec.trials < 1 || spec.cap < 2) {
    throw InvalidSpec("kmax_scan: need dt > 0, trials >= 1, cap >= 2");
  }
  const std::size_t n = static_cast<std::size_t>(l_max + 1) * h.radial_size();
  std::vector<cplx> prev(n), cur(n), w(n);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double log_eps = std::log(spec.eps);
  int worst = 0;

  for (int trial = 0; trial < spec.trials; ++trial) {
    for (auto& c : cur) {
      const double re = uni(rng);
      const double im = uni(rng);
      c = cplx(re, im);
    }
    const double nrm = norm2(cur.data(), n);
    for (auto& c : cur) c /= nrm;
    std::fill(prev.begin(), prev.end(), cplx{});
    double beta_prev = 0.0;
    double log_beta_sum = 0.0;
    int k_found = spec.cap + 1;
    for (int k = 0; k + 2 <= spec.cap; ++k) {
      h.apply(std::span<const cplx>(cur), std::span<cplx>(w));
      const double hq = norm2(w.data(), n);
      const double a = dot_re(cur.data(), w.data(), n);
      for (std::size_t i = 0; i < n; ++i) w[i] -= a * cur[i] + beta_prev * prev[i];
      const double b = norm2(w.data(), n);
      if (b <= 1e-14 * hq) {
        k_found = k + 2;
        break;
      }
      log_beta_sum += std::log(b);
      if (2.0 * log_error_product(log_beta_sum, k + 1, dt) < log_eps) {
        k_found = k + 2;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) {
        prev[i] = cur[i];
        cur[i] = w[i] / b;
      }
      beta_prev = b;
    }
    worst = std::max(worst, k_found);
    if (worst > spec.cap) break;
  }
  return worst;
}

}  // namespace ets
