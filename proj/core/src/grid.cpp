#include "ets/grid.hpp"

#include "ets/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ets {

namespace {

// Legendre P_n and P_{n-1} at x by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double p_prev = 1.0;
  double p = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  return {p, p_prev};
}

// Reference Lobatto nodes on [-1, 1]: endpoints plus the roots of P'_{n-1}.
std::vector<double> reference_lobatto_nodes(int n) {
  const int order = n - 1;
  std::vector<double> x(n);
  x.front() = -1.0;
  x.back() = 1.0;
  for (int i = 1; i < n - 1; ++i) {
    double xi = -std::cos(std::numbers::pi * i / order);
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, pm1] = legendre_pair(order, xi);
      const double dp = order * (xi * p - pm1) / (xi * xi - 1.0);
      // (1 - x^2) P'' = 2x P' - n(n+1) P
      const double d2p = (2.0 * xi * dp - order * (order + 1.0) * p) /
                         (1.0 - xi * xi);
      const double step = dp / d2p;
      xi -= step;
      if (std::abs(step) < 1e-14) break;
    }
    x[i] = xi;
  }
  std::sort(x.begin(), x.end());
  return x;
}

// Barycentric weights 1 / prod_{k != j} (x_j - x_k).
std::vector<double> barycentric_weights(const std::vector<double>& x) {
  std::vector<double> lam(x.size(), 1.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k != j) lam[j] *= x[j] - x[k];
    }
    lam[j] = 1.0 / lam[j];
  }
  return lam;
}

// d(i, j) = f_j'(x_i) for the Lagrange cardinal functions on nodes x.
Eigen::MatrixXd differentiation_matrix(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  const auto lam = barycentric_weights(x);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (lam[j] / lam[i]) / (x[i] - x[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

}  // namespace

GridSpec GridSpec::uniform(int n_dvr, int n_fe_inner, int n_fe_outer,
                           double delta_xi) {
  GridSpec s;
  s.n_dvr = n_dvr;
  s.n_fe_inner = n_fe_inner;
  s.n_fe_outer = n_fe_outer;
  s.r_sigma = n_fe_inner * delta_xi;
  s.xi_max = (n_fe_inner + n_fe_outer) * delta_xi;
  return s;
}

void GridSpec::validate() const {
  if (n_dvr < 2) {
    throw InvalidSpec("grid: n_dvr must be >= 2, got " + std::to_string(n_dvr));
  }
  if (n_fe_inner < 0 || n_fe_outer < 0 || n_elements() < 1) {
    throw InvalidSpec("grid: element counts must be non-negative with at "
                      "least one element");
  }
  // r_sigma == xi_max is the unscaled box (no outer elements).
  if (!(xi_max > 0.0) || !(r_sigma >= 0.0) ||
      (n_fe_outer > 0 && !(xi_max > r_sigma))) {
    throw InvalidSpec("grid: need xi_max > r_sigma >= 0");
  }
  const double boundary = n_fe_inner * delta_xi();
  if (std::abs(boundary - r_sigma) > 1e-10 * std::max(1.0, xi_max)) {
    throw InvalidSpec("grid: r_sigma = " + std::to_string(r_sigma) +
                      " is not on an element boundary (n_fe_inner * delta_xi "
                      "= " + std::to_string(boundary) + ")");
  }
  if (basis_size() < 1) {
    throw InvalidSpec("grid: basis is empty");
  }
}

QuadratureRule lobatto_rule(int n, double a, double b) {
  if (n < 2) {
    throw InvalidSpec("lobatto_rule: need at least 2 points, got " +
                      std::to_string(n));
  }
  if (!(a < b)) throw InvalidSpec("lobatto_rule: need a < b");
  const auto x = reference_lobatto_nodes(n);
  const int order = n - 1;
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    const double p = legendre_pair(order, x[i]).first;
    rule.nodes[i] = a + half * (x[i] + 1.0);
    rule.weights[i] = half * 2.0 / (order * (order + 1.0) * p * p);
  }
  rule.nodes.front() = a;
  rule.nodes.back() = b;
  return rule;
}

RadialGrid::RadialGrid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  const int n = spec_.n_dvr;
  const int ne = spec_.n_elements();
  const int total = spec_.basis_size();
  const double dx = spec_.delta_xi();

  barycentric_ = barycentric_weights(reference_lobatto_nodes(n));

  nodes_.assign(total, 0.0);
  weights_.assign(total, 0.0);
  elements_.resize(ne);

  for (int e = 0; e < ne; ++e) {
    Element& el = elements_[e];
    el.left = e * dx;
    el.right = (e + 1 == ne) ? spec_.xi_max : (e + 1) * dx;
    const auto rule = lobatto_rule(n, el.left, el.right);
    el.nodes = rule.nodes;
    el.weights = rule.weights;
    el.first_global = e * (n - 1) - 1;
    el.lo = (e == 0) ? 1 : 0;
    el.hi = (e + 1 == ne) ? n - 1 : n;
    for (int i = el.lo; i < el.hi; ++i) {
      const int g = el.global(i);
      nodes_[g] = el.nodes[i];
      weights_[g] += el.weights[i];
    }
  }
  // Element-boundary nodes are shared; pin them to the exact boundary.
  for (int e = 1; e < ne; ++e) nodes_[elements_[e].global(0)] = elements_[e].left;

  inv_sqrt_weight_.resize(total);
  for (int k = 0; k < total; ++k) inv_sqrt_weight_[k] = 1.0 / std::sqrt(weights_[k]);

  for (Element& el : elements_) {
    const auto d = differentiation_matrix(el.nodes);
    const int m = el.size();
    el.kinetic.setZero(m, m);
    el.antisym.setZero(m, m);
    for (int i = el.lo; i < el.hi; ++i) {
      const double si = inv_sqrt_weight_[el.global(i)];
      // Upper triangle only, mirrored, so the symmetry is exact.
      for (int j = i; j < el.hi; ++j) {
        const double sj = inv_sqrt_weight_[el.global(j)];
        double kin = 0.0;
        for (int k = 0; k < n; ++k) kin += el.weights[k] * d(k, i) * d(k, j);
        const double a = (el.weights[i] * d(i, j) - el.weights[j] * d(j, i)) * si * sj;
        el.kinetic(i - el.lo, j - el.lo) = el.kinetic(j - el.lo, i - el.lo) = kin * si * sj;
        el.antisym(i - el.lo, j - el.lo) = a;
        el.antisym(j - el.lo, i - el.lo) = -a;
      }
    }
  }

  classes_.assign(total, BasisClass::inner);
  if (spec_.n_fe_inner == 0) {
    std::fill(classes_.begin(), classes_.end(), BasisClass::outer);
  } else if (spec_.n_fe_outer > 0) {
    const int b = (n - 1) * spec_.n_fe_inner - 1;
    bridge_ = b;
    classes_[b] = BasisClass::bridge;
    for (int k = b + 1; k < total; ++k) classes_[k] = BasisClass::outer;
  }
}

RadialGrid build_grid(const GridSpec& spec) { return RadialGrid(spec); }

namespace {
Eigen::SparseMatrix<double> assemble(const RadialGrid& grid, bool kinetic) {
  std::vector<Eigen::Triplet<double>> trips;
  for (const Element& el : grid.elements()) {
    const Eigen::MatrixXd& blk = kinetic ? el.kinetic : el.antisym;
    for (int i = 0; i < el.size(); ++i) {
      for (int j = 0; j < el.size(); ++j) {
        trips.emplace_back(el.global(el.lo + i), el.global(el.lo + j), blk(i, j));
      }
    }
  }
  Eigen::SparseMatrix<double> m(grid.size(), grid.size());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}
}  // namespace

Eigen::SparseMatrix<double> RadialGrid::kinetic_integrals() const {
  return assemble(*this, true);
}

Eigen::SparseMatrix<double> RadialGrid::antisym_integrals() const {
  return assemble(*this, false);
}

int RadialGrid::element_of(double xi) const {
  if (!(xi >= 0.0) || xi > spec_.xi_max * (1.0 + 1e-14)) {
    throw DomainError("grid: xi = " + std::to_string(xi) +
                      " outside [0, xi_max]");
  }
  const int e = static_cast<int>(std::ceil(xi / spec_.delta_xi())) - 1;
  return std::clamp(e, 0, element_count() - 1);
}

double RadialGrid::local_value(const Element& el, int local, double xi) const {
  const int n = spec_.n_dvr;
  const double scale = 2.0 / (el.right - el.left);
  // Cardinal functions on the physical nodes; use the reference barycentric
  // weights rescaled by the affine map.
  double num = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k == local) continue;
    const double diff = xi - el.nodes[k];
    num *= diff;
  }
  return num * barycentric_[local] * std::pow(scale, n - 1);
}

double RadialGrid::local_derivative(const Element& el, int local,
                                    double xi) const {
  const int n = spec_.n_dvr;
  const double scale = 2.0 / (el.right - el.left);
  double sum = 0.0;
  for (int m = 0; m < n; ++m) {
    if (m == local) continue;
    double prod = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == local || k == m) continue;
      prod *= xi - el.nodes[k];
    }
    sum += prod;
  }
  return sum * barycentric_[local] * std::pow(scale, n - 1);
}

double RadialGrid::evaluate(int kappa, double xi) const {
  if (xi < 0.0 || xi > spec_.xi_max) return 0.0;
  const int e = element_of(xi);
  double acc = 0.0;
  // A boundary function lives in two elements; xi selects one of them, and
  // at the shared node both sides agree.
  for (int cand : {e, e + 1}) {
    if (cand >= element_count()) continue;
    const Element& el = elements_[cand];
    if (xi < el.left || xi > el.right) continue;
    const int local = kappa - el.first_global;
    if (local < el.lo || local >= el.hi) continue;
    acc = local_value(el, local, xi) * inv_sqrt_weight_[kappa];
    break;
  }
  return acc;
}

double RadialGrid::derivative(int kappa, double xi) const {
  if (xi < 0.0 || xi > spec_.xi_max) return 0.0;
  const Element& el = elements_[element_of(xi)];
  const int local = kappa - el.first_global;
  if (local < el.lo || local >= el.hi) return 0.0;
  return local_derivative(el, local, xi) * inv_sqrt_weight_[kappa];
}

std::vector<double> quadrature_diag(const RadialGrid& grid,
                                    const std::function<double(double)>& f) {
  std::vector<double> out(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    const double v = f(grid.nodes()[k]);
    if (!std::isfinite(v)) {
      throw NumericalError("quadrature_diag: operator is singular at xi = " +
                           std::to_string(grid.nodes()[k]));
    }
    out[k] = v;
  }
  return out;
}

}  // namespace ets
