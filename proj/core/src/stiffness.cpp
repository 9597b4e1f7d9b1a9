#include "ets/stiffness.hpp"

#include "ets/error.hpp"
#include "ets/hamiltonian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>

namespace ets {

namespace {

void check_window(const RadialGrid& grid, int n_fe) {
  const GridSpec& spec = grid.spec();
  if (spec.n_fe_inner == 0) {
    throw InvalidSpec("stiffness filter: global scaling has no static inner "
                      "region to filter");
  }
  if (n_fe < 1 || n_fe > spec.n_fe_inner) {
    throw InvalidSpec("stiffness filter: n_fe = " + std::to_string(n_fe) +
                      " must lie in [1, n_fe_inner = " +
                      std::to_string(spec.n_fe_inner) + "]");
  }
}

// Accumulate the element blocks restricted to [0, window) into a dense
// matrix, with `pick` choosing kinetic or antisymmetric integrals.
template <typename Pick>
Eigen::MatrixXd window_matrix(const RadialGrid& grid, int window, Pick pick) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(window, window);
  for (const Element& el : grid.elements()) {
    if (el.global(el.lo) >= window) break;
    const Eigen::MatrixXd& blk = pick(el);
    for (int i = 0; i < el.size(); ++i) {
      const int gi = el.global(el.lo + i);
      if (gi >= window) continue;
      for (int j = 0; j < el.size(); ++j) {
        const int gj = el.global(el.lo + j);
        if (gj >= window) continue;
        m(gi, gj) += blk(i, j);
      }
    }
  }
  return m;
}

}  // namespace

int filter_window(int n_dvr, int n_fe) { return (n_dvr - 1) * n_fe - 1; }

std::vector<Eigen::MatrixXd> inner_blocks(const RadialGrid& grid, int l_max,
                                          int n_fe) {
  check_window(grid, n_fe);
  const int window = filter_window(grid.spec().n_dvr, n_fe);
  const Eigen::MatrixXd kin =
      0.5 * window_matrix(grid, window, [](const Element& e) -> const Eigen::MatrixXd& {
        return e.kinetic;
      });
  std::vector<Eigen::MatrixXd> out;
  out.reserve(l_max + 1);
  for (int l = 0; l <= l_max; ++l) {
    Eigen::MatrixXd h = kin;
    for (int k = 0; k < window; ++k) {
      h(k, k) += atomic_potential(l, grid.nodes()[k]);
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<Eigen::MatrixXcd> coupling_blocks(const RadialGrid& grid,
                                              const AngularCoupling& coupling,
                                              Gauge gauge, int n_fe) {
  check_window(grid, n_fe);
  const int window = filter_window(grid.spec().n_dvr, n_fe);
  Eigen::MatrixXd d;
  if (gauge == Gauge::velocity) {
    d = window_matrix(grid, window, [](const Element& e) -> const Eigen::MatrixXd& {
      return e.antisym;
    });
  }
  std::vector<Eigen::MatrixXcd> out;
  for (int l = 0; l < coupling.l_max(); ++l) {
    const double g = coupling.upper(l);
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(window, window);
    if (gauge == Gauge::length) {
      for (int k = 0; k < window; ++k) w(k, k) = g * grid.nodes()[k];
    } else {
      const double dL = (l + 1.0) * (l + 2.0) - l * (l + 1.0);
      const cplx c(0.0, -0.5 * g);
      w = c * d.cast<cplx>();
      for (int k = 0; k < window; ++k) w(k, k) += c * (dL / grid.nodes()[k]);
    }
    out.push_back(std::move(w));
  }
  return out;
}

bool StiffnessFilter::localization_ok() const {
  return std::none_of(report_.begin(), report_.end(),
                      [](const LocalizationEntry& e) { return e.flagged; });
}

std::string StiffnessFilter::localization_report() const {
  std::ostringstream os;
  os << "# l n e_nl edge_fraction flagged\n";
  char line[160];
  for (const auto& e : report_) {
    std::snprintf(line, sizeof line, "%d %d %.10e %.6e %d\n", e.l, e.n,
                  e.energy, e.edge_fraction, e.flagged ? 1 : 0);
    os << line;
  }
  return os.str();
}

std::shared_ptr<StiffnessFilter> build_filter(
    const std::vector<Eigen::MatrixXd>& blocks, double e_cut,
    const std::vector<Eigen::MatrixXcd>& w_blocks, Gauge gauge, int n_dvr,
    int n_fe, double edge_threshold, bool enforce_localization) {
  if (blocks.empty()) throw InvalidSpec("stiffness filter: no blocks");
  const int window = filter_window(n_dvr, n_fe);
  if (window < 1) throw InvalidSpec("stiffness filter: empty window");
  if (w_blocks.size() + 1 != blocks.size()) {
    throw DimensionError("stiffness filter: need l_max coupling blocks for "
                         "l_max + 1 diagonal blocks");
  }
  for (const auto& h : blocks) {
    if (h.rows() != window || h.cols() != window) {
      throw DimensionError("stiffness filter: block is not " +
                           std::to_string(window) + " square");
    }
    if (!h.allFinite()) throw NumericalError("stiffness filter: non-finite block");
  }
  for (const auto& w : w_blocks) {
    if (w.rows() != window || w.cols() != window) {
      throw DimensionError("stiffness filter: coupling block size mismatch");
    }
  }

  auto f = std::make_shared<StiffnessFilter>();
  f->window_ = window;
  f->n_fe_ = n_fe;
  f->e_cut_ = e_cut;
  f->gauge_ = gauge;
  const int edge_begin = std::max(0, (n_fe - 1) * (n_dvr - 1) - 1);

  std::vector<Eigen::MatrixXd> projector(blocks.size());
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks[l]);
    if (es.info() != Eigen::Success) {
      throw NumericalError("stiffness filter: eigensolver failed for l = " +
                           std::to_string(l));
    }
    const Eigen::VectorXd& e = es.eigenvalues();
    const Eigen::MatrixXd& u = es.eigenvectors();
    int kept = 0;
    while (kept < window && e(kept) <= e_cut) ++kept;
    f->eigenvalues_.push_back(e);
    f->eigenvectors_.push_back(u);
    f->retained_.push_back(kept);
    f->truncated_.push_back(kept < window);

    for (int n = kept; n < window; ++n) {
      LocalizationEntry entry;
      entry.l = static_cast<int>(l);
      entry.n = n;
      entry.energy = e(n);
      entry.edge_fraction = u.col(n).segment(edge_begin, window - edge_begin).squaredNorm();
      entry.flagged = entry.edge_fraction > edge_threshold;
      f->report_.push_back(entry);
    }

    if (kept < window) {
      const auto ur = u.leftCols(kept);
      projector[l] = ur * ur.transpose();
      f->reduced_.push_back(projector[l] * blocks[l] * projector[l]);
    } else {
      f->reduced_.push_back(blocks[l]);
    }
  }

  for (std::size_t l = 0; l < w_blocks.size(); ++l) {
    Eigen::MatrixXcd w = w_blocks[l];
    if (f->truncated_[l]) w = projector[l].cast<cplx>() * w;
    if (f->truncated_[l + 1]) w = w * projector[l + 1].cast<cplx>();
    f->reduced_w_.push_back(std::move(w));
  }

  if (enforce_localization && !f->localization_ok()) {
    throw StiffnessError(
        "stiffness filter: removed states reach the window edge (edge "
        "fraction above " + std::to_string(edge_threshold) +
        "); enlarge n_fe or e_cut\n" + f->localization_report());
  }
  return f;
}

std::shared_ptr<StiffnessFilter> make_filter(const RadialGrid& grid, int l_max,
                                             Gauge gauge, const FilterSpec& spec,
                                             bool enforce_localization) {
  auto blocks = inner_blocks(grid, l_max, spec.n_fe);
  auto w = coupling_blocks(grid, AngularCoupling(l_max), gauge, spec.n_fe);
  return build_filter(blocks, spec.e_cut, w, gauge, grid.spec().n_dvr,
                      spec.n_fe, spec.edge_threshold, enforce_localization);
}

void patch(Hamiltonian& assembly, std::shared_ptr<const StiffnessFilter> filter) {
  assembly.attach_filter(std::move(filter));
}

}  // namespace ets
