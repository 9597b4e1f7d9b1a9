#include "ets/hamiltonian.hpp"

#include "ets/error.hpp"
#include "ets/stiffness.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace ets {

namespace {

// Local view of a window in the element blocks; counts structural nonzeros
// of the FEDVR pattern restricted to global indices < limit.
std::int64_t pattern_nonzeros(const RadialGrid& grid, int limit) {
  std::int64_t count = 0;
  for (int e = 0; e < grid.element_count(); ++e) {
    const Element& el = grid.element(e);
    std::int64_t m = 0;
    for (int i = el.lo; i < el.hi; ++i) {
      if (el.global(i) < limit) ++m;
    }
    count += m * m;
    // The last function of this element is shared with the next one.
    if (e + 1 < grid.element_count() && el.global(el.hi - 1) < limit) --count;
  }
  return count;
}

}  // namespace

double atomic_potential(int l, double r) {
  return 0.5 * l * (l + 1.0) / (r * r) - 1.0 / r;
}

Hamiltonian::Hamiltonian(std::shared_ptr<const RadialGrid> grid, int l_max,
                         ScalingSchedule schedule, Pulse pulse)
    : grid_(std::move(grid)),
      l_max_(l_max),
      n_(0),
      coupling_(l_max >= 0 ? l_max : 0),
      schedule_(schedule),
      pulse_(pulse),
      gauge_(pulse.spec().gauge),
      r_sigma_(0.0) {
  if (!grid_) throw InvalidSpec("hamiltonian: null grid");
  if (l_max < 0) throw InvalidSpec("hamiltonian: l_max must be >= 0");
  n_ = grid_->size();
  r_sigma_ = grid_->spec().r_sigma;
  xi_ = grid_->nodes();
  class_ = grid_->classes();
  const std::size_t nn = static_cast<std::size_t>(n_);
  r_.assign(nn, 0.0);
  centrifugal_.assign(nn, 0.0);
  base_.assign(nn, 0.0);
  inv_r_.assign(nn, 0.0);
  drift_.assign(nn, 0.0);

  std::size_t offset = 0;
  const int n_inner = grid_->spec().n_fe_inner;
  for (int e = 0; e < grid_->element_count(); ++e) {
    const Element& el = grid_->element(e);
    ElementBlock b;
    b.first = el.global(el.lo);
    b.size = el.size();
    b.offset = offset;
    // The last inner element holds the bridge function.
    b.dynamic = e >= n_inner - 1 && grid_->spec().n_fe_outer > 0;
    if (n_inner == 0) b.dynamic = true;
    offset += static_cast<std::size_t>(b.size) * b.size;
    blocks_.push_back(b);
  }
  kinetic_.assign(offset, 0.0);
  if (gauge_ == Gauge::velocity) deriv_.assign(offset, 0.0);
  update_time(0.0);
}

void Hamiltonian::update_time(double t) {
  const ScaleState s = schedule_.active() ? schedule_.scale(t) : ScaleState{};
  if (!std::isfinite(s.R) || !(s.R > 0.0)) {
    throw NumericalError("hamiltonian: invalid scaling factor R = " +
                         std::to_string(s.R) + " at t = " + std::to_string(t));
  }
  const bool r_changed = !initialized_ || s.R != scale_.R;
  t_ = t;
  scale_ = s;
  field_ = pulse_.field_and_potential(t);
  refresh_nodes();
  if (r_changed) refresh_blocks(!initialized_);
  initialized_ = true;
}

void Hamiltonian::refresh_nodes() {
  const double R = scale_.R;
  for (int k = 0; k < n_; ++k) {
    double r = xi_[k];
    double harmonic = 0.0;
    double drift = 0.0;
    switch (class_[k]) {
      case BasisClass::inner:
        break;
      case BasisClass::bridge:
        r = r_sigma_;
        break;
      case BasisClass::outer: {
        const double d = xi_[k] - r_sigma_;
        r = r_sigma_ + R * d;
        harmonic = 0.5 * R * scale_.Rddot * d * d;
        drift = scale_.Rdot * d;
        break;
      }
    }
    r_[k] = r;
    inv_r_[k] = 1.0 / r;
    centrifugal_[k] = 0.5 / (r * r);
    base_[k] = -1.0 / r + harmonic;
    drift_[k] = drift;
  }
}

void Hamiltonian::refresh_blocks(bool all) {
  const double R = scale_.R;
  const int n_inner = grid_->spec().n_fe_inner;
  // Bridge weights in the inner and outer element.
  const double bridge_in = std::sqrt(2.0 / (1.0 + R));
  const double bridge_out = std::sqrt(2.0 * R / (1.0 + R));
  for (int e = 0; e < grid_->element_count(); ++e) {
    const ElementBlock& b = blocks_[e];
    if (!all && !b.dynamic) continue;
    const Element& el = grid_->element(e);
    const bool outer = e >= n_inner;
    const double kin = outer ? 0.5 / (R * R) : 0.5;
    const double der = outer ? 1.0 / R : 1.0;
    const double bridge = outer ? bridge_out : bridge_in;
    const int m = b.size;
    for (int j = 0; j < m; ++j) {
      const double sj = class_[b.first + j] == BasisClass::bridge ? bridge : 1.0;
      for (int i = 0; i < m; ++i) {
        const double si =
            class_[b.first + i] == BasisClass::bridge ? bridge : 1.0;
        const std::size_t at = b.offset + static_cast<std::size_t>(j) * m + i;
        kinetic_[at] = kin * si * sj * el.kinetic(i, j);
        if (!deriv_.empty()) deriv_[at] = der * si * sj * el.antisym(i, j);
      }
    }
  }
  if (filter_) {
    const ElementBlock& b = blocks_[window_element_];
    const std::size_t len = static_cast<std::size_t>(b.size) * b.size;
    kinetic_masked_.assign(kinetic_.begin() + b.offset,
                           kinetic_.begin() + b.offset + len);
    if (!deriv_.empty()) {
      deriv_masked_.assign(deriv_.begin() + b.offset,
                           deriv_.begin() + b.offset + len);
    }
    for (int j = 0; j < b.size; ++j) {
      for (int i = 0; i < b.size; ++i) {
        if (b.first + i < window_ && b.first + j < window_) {
          const std::size_t at = static_cast<std::size_t>(j) * b.size + i;
          kinetic_masked_[at] = 0.0;
          if (!deriv_masked_.empty()) deriv_masked_[at] = 0.0;
        }
      }
    }
  }
}

void Hamiltonian::attach_filter(std::shared_ptr<const StiffnessFilter> filter) {
  if (!filter) {
    filter_.reset();
    window_ = 0;
    window_element_ = 0;
    kinetic_masked_.clear();
    deriv_masked_.clear();
    return;
  }
  const GridSpec& spec = grid_->spec();
  if (spec.n_fe_inner == 0) {
    throw InvalidSpec("stiffness filter: no unscaled inner region (global "
                      "scaling); filtering is not applicable");
  }
  if (filter->n_fe() < 1 || filter->n_fe() > spec.n_fe_inner) {
    throw InvalidSpec("stiffness filter: window of " +
                      std::to_string(filter->n_fe()) +
                      " elements does not fit in the inner region of " +
                      std::to_string(spec.n_fe_inner));
  }
  if (filter->window() != filter_window(spec.n_dvr, filter->n_fe())) {
    throw DimensionError("stiffness filter: window size does not match grid");
  }
  if (filter->l_max() < l_max_) {
    throw DimensionError("stiffness filter: built for l_max = " +
                         std::to_string(filter->l_max()) + " < " +
                         std::to_string(l_max_));
  }
  if (filter->gauge() != gauge_) {
    throw InvalidSpec("stiffness filter: gauge does not match the assembly");
  }
  filter_ = std::move(filter);
  window_ = filter_->window();
  window_element_ = filter_->n_fe() - 1;
  refresh_blocks(false);
}

void Hamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  apply_impl(x, y, Part::full);
}

StateVector Hamiltonian::apply(const StateVector& v) const {
  if (v.radial_size != n_) {
    throw DimensionError("hamiltonian: radial size mismatch");
  }
  StateVector out(v.l_max, v.radial_size, v.t);
  apply(std::span<const cplx>(v.coeffs), std::span<cplx>(out.coeffs));
  return out;
}

void Hamiltonian::velocity_gauge_terms(std::span<const cplx> x,
                                       std::span<cplx> y) const {
  if (gauge_ != Gauge::velocity) {
    throw InvalidSpec("hamiltonian: velocity-gauge terms requested in the "
                      "length gauge");
  }
  apply_impl(x, y, Part::field_only);
}

void Hamiltonian::apply_impl(std::span<const cplx> x, std::span<cplx> y,
                             Part part) const {
  if (x.size() != y.size() || x.empty() || x.size() % n_ != 0 ||
      x.size() > dimension()) {
    throw DimensionError("hamiltonian: operand of size " +
                         std::to_string(x.size()) +
                         " does not match radial size " + std::to_string(n_) +
                         " and l_max " + std::to_string(l_max_));
  }
  const int blocks = static_cast<int>(x.size() / n_);
  const cplx* xp = x.data();
  cplx* yp = y.data();
#ifdef ETS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int l = 0; l < blocks; ++l) {
    cplx* yl = yp + static_cast<std::size_t>(l) * n_;
    std::fill(yl, yl + n_, cplx{});
    if (part == Part::full) apply_diagonal(l, xp + static_cast<std::size_t>(l) * n_, yl);
    if (l > 0) {
      apply_coupling(l, l - 1, xp + static_cast<std::size_t>(l - 1) * n_, yl, part);
    }
    if (l + 1 < blocks) {
      apply_coupling(l, l + 1, xp + static_cast<std::size_t>(l + 1) * n_, yl, part);
    }
  }
}

void Hamiltonian::apply_diagonal(int l, const cplx* x, cplx* y) const {
  int first_element = 0;
  int first_node = 0;
  const bool filtered = filter_ && filter_->truncated(l);
  if (filtered) {
    Eigen::Map<Eigen::VectorXcd>(y, window_).noalias() +=
        filter_->reduced_block(l) * Eigen::Map<const Eigen::VectorXcd>(x, window_);
    const ElementBlock& b = blocks_[window_element_];
    for (int j = 0; j < b.size; ++j) {
      const cplx xj = x[b.first + j];
      const double* col = kinetic_masked_.data() + static_cast<std::size_t>(j) * b.size;
      for (int i = 0; i < b.size; ++i) y[b.first + i] += col[i] * xj;
    }
    first_element = window_element_ + 1;
    first_node = window_;
  }
  for (int e = first_element; e < static_cast<int>(blocks_.size()); ++e) {
    const ElementBlock& b = blocks_[e];
    const double* blk = kinetic_.data() + b.offset;
    for (int j = 0; j < b.size; ++j) {
      const cplx xj = x[b.first + j];
      const double* col = blk + static_cast<std::size_t>(j) * b.size;
      cplx* yb = y + b.first;
      for (int i = 0; i < b.size; ++i) yb[i] += col[i] * xj;
    }
  }
  const double L = l * (l + 1.0);
  for (int k = first_node; k < n_; ++k) {
    y[k] += (L * centrifugal_[k] + base_[k]) * x[k];
  }
}

void Hamiltonian::window_coupling(const Eigen::MatrixXcd& w, bool lower, double s,
                                  const cplx* x, cplx* y) const {
  Eigen::Map<const Eigen::VectorXcd> xv(x, window_);
  Eigen::Map<Eigen::VectorXcd> yv(y, window_);
  if (lower) {
    yv.noalias() += s * (w * xv);
  } else {
    yv.noalias() += s * (w.adjoint() * xv);
  }
}

void Hamiltonian::apply_coupling(int l, int lp, const cplx* x, cplx* y,
                                 Part part) const {
  const double g = coupling_(l, lp);
  const int lo = std::min(l, lp);
  const bool filtered =
      filter_ && (filter_->truncated(l) || filter_->truncated(lp));
  int first_node = 0;
  int first_element = 0;

  if (gauge_ == Gauge::length) {
    if (part == Part::field_only) return;
    const double F = field_.field;
    if (F == 0.0) return;
    if (filtered) {
      window_coupling(filter_->reduced_coupling(lo), l == lo, F, x, y);
      first_node = window_;
    }
    const double gF = g * F;
    for (int k = first_node; k < n_; ++k) y[k] += gF * r_[k] * x[k];
    return;
  }

  const double A = field_.potential;
  if (A == 0.0) return;
  const cplx c(0.0, -0.5 * A * g);
  if (filtered) {
    window_coupling(filter_->reduced_coupling(lo), l == lo, A, x, y);
    const ElementBlock& b = blocks_[window_element_];
    for (int j = 0; j < b.size; ++j) {
      const cplx xj = c * x[b.first + j];
      const double* col = deriv_masked_.data() + static_cast<std::size_t>(j) * b.size;
      for (int i = 0; i < b.size; ++i) y[b.first + i] += col[i] * xj;
    }
    first_element = window_element_ + 1;
    first_node = window_;
  }
  for (int e = first_element; e < static_cast<int>(blocks_.size()); ++e) {
    const ElementBlock& b = blocks_[e];
    const double* blk = deriv_.data() + b.offset;
    for (int j = 0; j < b.size; ++j) {
      const cplx xj = c * x[b.first + j];
      const double* col = blk + static_cast<std::size_t>(j) * b.size;
      cplx* yb = y + b.first;
      for (int i = 0; i < b.size; ++i) yb[i] += col[i] * xj;
    }
  }
  const double dL = lp * (lp + 1.0) - l * (l + 1.0);
  const double gA = g * A;
  for (int k = first_node; k < n_; ++k) {
    y[k] += (c * (dL * inv_r_[k]) + gA * drift_[k]) * x[k];
  }
}

std::int64_t Hamiltonian::nonzero_count() const {
  const std::int64_t full = pattern_nonzeros(*grid_, n_);
  std::int64_t patch = 0;
  if (filter_) {
    patch = static_cast<std::int64_t>(window_) * window_ -
            pattern_nonzeros(*grid_, window_);
  }
  std::int64_t count = 0;
  for (int l = 0; l <= l_max_; ++l) {
    count += full;
    if (filter_ && filter_->truncated(l)) count += patch;
  }
  for (int l = 0; l < l_max_; ++l) {
    const bool filtered =
        filter_ && (filter_->truncated(l) || filter_->truncated(l + 1));
    std::int64_t block = 0;
    if (gauge_ == Gauge::length) {
      block = filtered ? n_ - window_ + static_cast<std::int64_t>(window_) * window_
                       : n_;
    } else {
      block = full + (filtered ? patch : 0);
    }
    count += 2 * block;
  }
  return count;
}

Eigen::SparseMatrix<double> Hamiltonian::diagonal_block(int l) const {
  if (l < 0 || l > l_max_) throw DimensionError("hamiltonian: block out of range");
  std::vector<Eigen::Triplet<double>> trips;
  int first_element = 0;
  int first_node = 0;
  if (filter_ && filter_->truncated(l)) {
    const Eigen::MatrixXd& h = filter_->reduced_block(l);
    for (int j = 0; j < window_; ++j) {
      for (int i = 0; i < window_; ++i) trips.emplace_back(i, j, h(i, j));
    }
    const ElementBlock& b = blocks_[window_element_];
    for (int j = 0; j < b.size; ++j) {
      for (int i = 0; i < b.size; ++i) {
        const double v = kinetic_masked_[static_cast<std::size_t>(j) * b.size + i];
        if (v != 0.0) trips.emplace_back(b.first + i, b.first + j, v);
      }
    }
    first_element = window_element_ + 1;
    first_node = window_;
  }
  for (int e = first_element; e < static_cast<int>(blocks_.size()); ++e) {
    const ElementBlock& b = blocks_[e];
    for (int j = 0; j < b.size; ++j) {
      for (int i = 0; i < b.size; ++i) {
        trips.emplace_back(b.first + i, b.first + j,
                           kinetic_[b.offset + static_cast<std::size_t>(j) * b.size + i]);
      }
    }
  }
  const double L = l * (l + 1.0);
  for (int k = first_node; k < n_; ++k) {
    trips.emplace_back(k, k, L * centrifugal_[k] + base_[k]);
  }
  Eigen::SparseMatrix<double> m(n_, n_);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::MatrixXcd Hamiltonian::to_dense(int blocks) const {
  if (blocks < 0) blocks = l_max_ + 1;
  if (blocks < 1 || blocks > l_max_ + 1) {
    throw DimensionError("hamiltonian: to_dense block count out of range");
  }
  const int dim = blocks * n_;
  Eigen::MatrixXcd out(dim, dim);
  std::vector<cplx> e(dim), col(dim);
  for (int j = 0; j < dim; ++j) {
    std::fill(e.begin(), e.end(), cplx{});
    e[j] = 1.0;
    apply(std::span<const cplx>(e), std::span<cplx>(col));
    for (int i = 0; i < dim; ++i) out(i, j) = col[i];
  }
  return out;
}

}  // namespace ets
