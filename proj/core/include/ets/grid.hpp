#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <optional>
#include <vector>

namespace ets {

/// Partition of [0, xi_max] into uniform finite elements, split at r_sigma.
///
/// Elements [0, r_sigma] are "inner" (never scaled) and (r_sigma, xi_max]
/// are "outer" (scaled by R(t)). With n_fe_inner == 0 the whole range is
/// outer, which is the global-scaling limit; with n_fe_outer == 0 nothing
/// is scaled.
struct GridSpec {
  double r_sigma = 0.0;
  double xi_max = 0.0;
  int n_dvr = 0;
  int n_fe_inner = 0;
  int n_fe_outer = 0;

  static GridSpec uniform(int n_dvr, int n_fe_inner, int n_fe_outer,
                          double delta_xi);

  int n_elements() const { return n_fe_inner + n_fe_outer; }
  double delta_xi() const { return xi_max / n_elements(); }
  int basis_size() const { return (n_dvr - 1) * n_elements() - 1; }

  /// Throws InvalidSpec when an invariant is violated.
  void validate() const;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Lobatto rule with n points on [a, b] (both endpoints included).
QuadratureRule lobatto_rule(int n, double a, double b);

enum class BasisClass { inner, bridge, outer };

/// Static description of one finite element.
///
/// Local function i of element e maps to global index
/// `first_global + i`; only locals in [lo, hi) are retained (the functions
/// sitting on xi = 0 and xi = xi_max are dropped). The integral blocks are
/// (hi - lo) x (hi - lo), indexed from lo, and already carry the global
/// normalization of each basis function, so boundary ("bridge-style")
/// functions receive the contributions of both adjacent elements after
/// summation.
struct Element {
  double left = 0.0;
  double right = 0.0;
  int first_global = 0;
  int lo = 0;
  int hi = 0;
  std::vector<double> nodes;    // all n_dvr local nodes
  std::vector<double> weights;  // all n_dvr local Lobatto weights
  Eigen::MatrixXd kinetic;      // int chi_i' chi_j'
  Eigen::MatrixXd antisym;      // int (chi_i chi_j' - chi_i' chi_j)

  int size() const { return hi - lo; }
  int global(int local) const { return first_global + local; }
};

/// FEDVR basis on [0, xi_max].
///
/// Immutable after construction. Functions are stored implicitly through
/// the element nodes; pointwise evaluation goes through Lagrange
/// interpolation and is meant for reconstruction and plotting.
class RadialGrid {
 public:
  explicit RadialGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<BasisClass>& classes() const { return classes_; }
  BasisClass basis_class(int kappa) const { return classes_[kappa]; }

  /// Global index of the function straddling r_sigma, if both regions exist.
  std::optional<int> bridge_index() const { return bridge_; }

  int element_count() const { return static_cast<int>(elements_.size()); }
  const Element& element(int e) const { return elements_[e]; }
  const std::vector<Element>& elements() const { return elements_; }

  /// First interior node of the first element.
  double first_node() const { return nodes_.front(); }

  /// Assembled global matrices (sparse, symmetric resp. antisymmetric).
  Eigen::SparseMatrix<double> kinetic_integrals() const;
  Eigen::SparseMatrix<double> antisym_integrals() const;

  /// Value and first derivative of basis function kappa at xi.
  double evaluate(int kappa, double xi) const;
  double derivative(int kappa, double xi) const;

  /// Element containing xi (right-closed intervals, element 0 includes 0).
  int element_of(double xi) const;

  /// Evaluate sum_k c_k chi_k(xi) for a coefficient span over this grid.
  template <typename T>
  T interpolate(const T* coeffs, double xi) const;

 private:
  double local_value(const Element& el, int local, double xi) const;
  double local_derivative(const Element& el, int local, double xi) const;
  double norm_factor(int kappa) const { return inv_sqrt_weight_[kappa]; }

  GridSpec spec_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> inv_sqrt_weight_;
  std::vector<BasisClass> classes_;
  std::vector<Element> elements_;
  std::vector<double> barycentric_;  // reference barycentric weights
  std::optional<int> bridge_;
};

RadialGrid build_grid(const GridSpec& spec);

/// DVR representation of a multiplicative operator f(xi): f at every node.
/// Throws NumericalError when f is not finite at some node.
std::vector<double> quadrature_diag(const RadialGrid& grid,
                                    const std::function<double(double)>& f);

template <typename T>
T RadialGrid::interpolate(const T* coeffs, double xi) const {
  const Element& el = elements_[element_of(xi)];
  T acc{};
  for (int i = el.lo; i < el.hi; ++i) {
    acc += coeffs[el.global(i)] * (local_value(el, i, xi) *
                                   inv_sqrt_weight_[el.global(i)]);
  }
  return acc;
}

}  // namespace ets
