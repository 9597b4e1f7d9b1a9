#pragma once

#include "ets/hamiltonian.hpp"
#include "ets/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ets {

struct StepReport {
  int k_used = 0;
  double error_estimate = 0.0;  // |beta_1 ... beta_{K-1} dt^{K-1} / (K-1)!|^2
  double norm_after = 0.0;
  bool reorthogonalized = false;
  bool breakdown = false;
};

struct PropagatorSpec {
  double eps = 1e-15;
  int max_k = 1000;
  double ortho_tolerance = 1e-10;
};

/// Short-time Lanczos propagator with adaptive Krylov dimension.
///
/// Each step freezes H at the midpoint t + dt/2, grows the Krylov space
/// until the error product drops below eps and applies the exponential of
/// the tridiagonal projection through its eigendecomposition. Loss of
/// orthogonality is tracked with the Simon recurrence; when the estimate
/// exceeds ortho_tolerance the new vector is fully reorthogonalized.
///
/// Owns its workspace, so one instance serves one propagation at a time.
class LanczosPropagator {
 public:
  explicit LanczosPropagator(PropagatorSpec spec = {});

  const PropagatorSpec& spec() const { return spec_; }

  /// Advance psi from t to t + dt in place. Throws StiffnessError when
  /// max_k is reached, NumericalError on non-finite data.
  StepReport step(Hamiltonian& h, std::span<cplx> psi, double t, double dt);
  StepReport step(Hamiltonian& h, StateVector& psi, double dt);

  /// Same step with H at its current time (no update).
  StepReport step_frozen(const Hamiltonian& h, std::span<cplx> psi, double dt);

 private:
  PropagatorSpec spec_;
  std::vector<std::vector<cplx>> basis_;
  std::vector<cplx> work_;
};

/// Smallest K with (K-1)/dt > e [2 pi (K-1) eps]^{-1/(2(K-1))} B,
/// B = l_max (l_max + 1) / (2 xi_1^2). nullopt when no K <= limit works.
/// Assumes the centrifugal term at the first node is the largest
/// eigenvalue; the random-vector scan is the authoritative number.
std::optional<int> estimate_kmax(int l_max, double xi1, double dt, double eps,
                                 int limit = 10000);

struct ScanSpec {
  int trials = 100;
  double eps = 1e-15;
  int cap = 1000;
  std::uint64_t seed = 20240101;
};

/// Max over random normalized start vectors of the K the error criterion
/// selects, using the first `l_max + 1` blocks of h at its current time.
/// Returns cap + 1 when some trial does not converge within cap.
int kmax_scan(const Hamiltonian& h, int l_max, double dt, const ScanSpec& spec);

}  // namespace ets
