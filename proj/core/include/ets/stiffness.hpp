#pragma once

#include "ets/angular.hpp"
#include "ets/grid.hpp"
#include "ets/pulse.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace ets {

class Hamiltonian;

struct FilterSpec {
  int n_fe = 10;              // elements in the filter window (<= n_fe_inner)
  double e_cut = 900.0;       // eigenvalues above this are removed
  double edge_threshold = 0.1;  // max removed-state norm in the last element
};

/// Per removed eigenvector: norm fraction inside the last window element.
struct LocalizationEntry {
  int l = 0;
  int n = 0;  // 0-based index in ascending eigenvalue order
  double energy = 0.0;
  double edge_fraction = 0.0;
  bool flagged = false;
};

/// Window size N~ = (n_dvr - 1) n_fe - 1.
int filter_window(int n_dvr, int n_fe);

/// Field-free inner blocks h_l on the first N~ basis functions
/// (kinetic/2 + V_l at the nodes). The truncation to N~ functions acts as
/// a hard wall at xi = n_fe * delta_xi.
std::vector<Eigen::MatrixXd> inner_blocks(const RadialGrid& grid, int l_max,
                                          int n_fe);

/// Interaction blocks w_{l,l+1} on the window with the field factor
/// divided out: g x in the length gauge, and
/// -(i/2) g [antisym + (L' - L)/xi] in the velocity gauge.
std::vector<Eigen::MatrixXcd> coupling_blocks(const RadialGrid& grid,
                                              const AngularCoupling& coupling,
                                              Gauge gauge, int n_fe);

/// Spectral filter of the inner window.
///
/// For each l the eigenvectors of h_l with eigenvalue above e_cut are
/// projected out: h~_l = P_l h_l P_l and w~_{l,l'} = P_l w_{l,l'} P_l',
/// with P_l the projector on the retained eigenvectors. Immutable.
class StiffnessFilter {
 public:
  int window() const { return window_; }
  int n_fe() const { return n_fe_; }
  double e_cut() const { return e_cut_; }
  int l_max() const { return static_cast<int>(reduced_.size()) - 1; }
  Gauge gauge() const { return gauge_; }

  /// True when at least one eigenvector of h_l was removed.
  bool truncated(int l) const { return truncated_[l]; }
  int retained(int l) const { return retained_[l]; }

  const Eigen::VectorXd& eigenvalues(int l) const { return eigenvalues_[l]; }
  const Eigen::MatrixXd& eigenvectors(int l) const { return eigenvectors_[l]; }
  const Eigen::MatrixXd& reduced_block(int l) const { return reduced_[l]; }
  /// w~_{l,l+1}; the (l+1, l) block is its adjoint.
  const Eigen::MatrixXcd& reduced_coupling(int l) const { return reduced_w_[l]; }

  const std::vector<LocalizationEntry>& localization() const { return report_; }
  bool localization_ok() const;
  /// Plain-text table: l, n, e_nl, edge fraction.
  std::string localization_report() const;

  friend std::shared_ptr<StiffnessFilter> build_filter(
      const std::vector<Eigen::MatrixXd>& blocks, double e_cut,
      const std::vector<Eigen::MatrixXcd>& w_blocks, Gauge gauge, int n_dvr,
      int n_fe, double edge_threshold, bool enforce_localization);

 private:
  int window_ = 0;
  int n_fe_ = 0;
  double e_cut_ = 0.0;
  Gauge gauge_ = Gauge::length;
  std::vector<bool> truncated_;
  std::vector<int> retained_;
  std::vector<Eigen::VectorXd> eigenvalues_;
  std::vector<Eigen::MatrixXd> eigenvectors_;
  std::vector<Eigen::MatrixXd> reduced_;
  std::vector<Eigen::MatrixXcd> reduced_w_;
  std::vector<LocalizationEntry> report_;
};

/// Diagonalize the blocks, cut at e_cut and reconstruct. With
/// enforce_localization, any removed state whose edge fraction exceeds
/// edge_threshold raises StiffnessError (enlarge n_fe or e_cut).
std::shared_ptr<StiffnessFilter> build_filter(
    const std::vector<Eigen::MatrixXd>& blocks, double e_cut,
    const std::vector<Eigen::MatrixXcd>& w_blocks, Gauge gauge, int n_dvr,
    int n_fe, double edge_threshold = 0.1, bool enforce_localization = true);

/// inner_blocks + coupling_blocks + build_filter for a grid.
std::shared_ptr<StiffnessFilter> make_filter(const RadialGrid& grid, int l_max,
                                             Gauge gauge, const FilterSpec& spec,
                                             bool enforce_localization = true);

/// Attach the filter to the assembly (top-left corners of the diagonal
/// and dipole blocks become the dense filtered blocks).
void patch(Hamiltonian& assembly, std::shared_ptr<const StiffnessFilter> filter);

}  // namespace ets
