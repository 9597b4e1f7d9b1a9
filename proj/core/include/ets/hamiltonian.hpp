#pragma once

#include "ets/angular.hpp"
#include "ets/grid.hpp"
#include "ets/pulse.hpp"
#include "ets/scaling.hpp"
#include "ets/types.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace ets {

class StiffnessFilter;

/// Radial potential V_l(r) = l(l+1)/(2 r^2) - 1/r.
double atomic_potential(int l, double r);

/// Time-dependent block Hamiltonian of the exterior-scaled radial problem.
///
/// The state layout is that of StateVector. Radial pieces are kept per
/// finite element (ell-independent) together with per-node diagonals, and
/// the ell-coupling is generated on the fly from the angular table, so
/// memory is O(N) regardless of l_max. The assembled operator is real
/// symmetric in the length gauge and Hermitian in the velocity gauge.
///
/// Matrix entries that depend on R(t) (outer kinetic and potential terms,
/// the harmonic confinement, the bridge row/column weights and, in the
/// velocity gauge, the scaled derivative couplings) are refreshed by
/// update_time(); everything else is computed once.
///
/// Thread-safety: apply() is const and may run concurrently with other
/// apply() calls; update_time() and attach_filter() need exclusive access.
class Hamiltonian {
 public:
  Hamiltonian(std::shared_ptr<const RadialGrid> grid, int l_max,
              ScalingSchedule schedule, Pulse pulse);

  int l_max() const { return l_max_; }
  int radial_size() const { return n_; }
  std::size_t dimension() const {
    return static_cast<std::size_t>(l_max_ + 1) * n_;
  }
  Gauge gauge() const { return gauge_; }
  const RadialGrid& grid() const { return *grid_; }
  const AngularCoupling& coupling() const { return coupling_; }
  const ScalingSchedule& schedule() const { return schedule_; }
  const Pulse& pulse() const { return pulse_; }

  /// Refresh every R(t)- and field-dependent entry for time t.
  void update_time(double t);
  double time() const { return t_; }
  const ScaleState& scale_state() const { return scale_; }
  const FieldValue& field() const { return field_; }

  /// y = H(t) x. x may hold fewer ell-blocks than l_max + 1 (a whole number
  /// of radial blocks); the leading principal sub-operator is applied.
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  StateVector apply(const StateVector& v) const;

  /// Velocity-gauge interaction alone (zero in the length gauge is an
  /// error): the derivative couplings, the angular 1/r terms, and the
  /// A Rdot (xi - r_sigma) drift term.
  void velocity_gauge_terms(std::span<const cplx> x, std::span<cplx> y) const;

  /// Replace the inner-window corners by the filtered blocks. Passing null
  /// detaches. Throws InvalidSpec in the global-scaling limit.
  void attach_filter(std::shared_ptr<const StiffnessFilter> filter);
  const StiffnessFilter* filter() const { return filter_.get(); }

  /// Structural nonzeros of the full (l_max + 1) N square matrix, counting
  /// both triangles and the dense filtered corners.
  std::int64_t nonzero_count() const;

  /// Field-free diagonal block l (kinetic + potential, filtered corner
  /// included) at the current time, as a real symmetric sparse matrix.
  Eigen::SparseMatrix<double> diagonal_block(int l) const;

  /// Dense copy via unit-vector application; for small systems only.
  Eigen::MatrixXcd to_dense(int blocks = -1) const;

  /// Current physical radius r of each node.
  const std::vector<double>& node_radius() const { return r_; }

 private:
  struct ElementBlock {
    int first = 0;     // global index of the first retained local function
    int size = 0;
    std::size_t offset = 0;  // into the flat block storage
    bool dynamic = false;    // touches a bridge or outer function
  };

  enum class Part { full, field_only };

  void refresh_nodes();
  void refresh_blocks(bool all);
  void apply_impl(std::span<const cplx> x, std::span<cplx> y, Part part) const;
  void apply_diagonal(int l, const cplx* x, cplx* y) const;
  void apply_coupling(int l, int lp, const cplx* x, cplx* y, Part part) const;
  // Dense filtered corner of the (l, l +- 1) coupling, scaled by s.
  void window_coupling(const Eigen::MatrixXcd& w, bool lower, double s, const cplx* x,
                       cplx* y) const;

  std::shared_ptr<const RadialGrid> grid_;
  int l_max_;
  int n_;
  AngularCoupling coupling_;
  ScalingSchedule schedule_;
  Pulse pulse_;
  Gauge gauge_;
  double r_sigma_;

  double t_ = 0.0;
  ScaleState scale_;
  FieldValue field_;
  bool initialized_ = false;

  std::vector<double> xi_;
  std::vector<BasisClass> class_;
  std::vector<double> r_;         // physical radius per node
  std::vector<double> centrifugal_;  // 1/(2 r^2)
  std::vector<double> base_;      // -1/r (+ harmonic term outside)
  std::vector<double> inv_r_;
  std::vector<double> drift_;     // Rdot (xi - r_sigma) outside, else 0

  std::vector<ElementBlock> blocks_;
  std::vector<double> kinetic_;  // scaled kinetic element blocks (col-major)
  std::vector<double> deriv_;    // scaled antisymmetric blocks (velocity)

  std::shared_ptr<const StiffnessFilter> filter_;
  int window_ = 0;           // filtered corner size
  int window_element_ = 0;   // element holding the window edge function
  std::vector<double> kinetic_masked_;  // that element, window entries zeroed
  std::vector<double> deriv_masked_;
};

}  // namespace ets
