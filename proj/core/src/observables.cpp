#include "ets/observables.hpp"

#include "ets/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ets {

namespace {

// Sum_k c_k chi_k(xi) for one radial block, with the bridge coefficient
// weighted as seen from the element that contains xi.
cplx evaluate_block(const RadialGrid& grid, const cplx* c, double xi, double R) {
  const int e = grid.element_of(xi);
  const Element& el = grid.element(e);
  const bool outer = e >= grid.spec().n_fe_inner;
  const double bridge = outer ? std::sqrt(2.0 * R / (1.0 + R)) : std::sqrt(2.0 / (1.0 + R));
  cplx acc{};
  for (int i = el.lo; i < el.hi; ++i) {
    const int k = el.global(i);
    double w = grid.evaluate(k, xi);
    if (grid.basis_class(k) == BasisClass::bridge) w *= bridge;
    acc += c[k] * w;
  }
  return acc;
}

void check_state(const StateVector& v, const RadialGrid& grid) {
  if (v.radial_size != grid.size() ||
      v.coeffs.size() != static_cast<std::size_t>(v.l_max + 1) * v.radial_size) {
    throw DimensionError("observables: state does not match the grid");
  }
}

}  // namespace

double norm_squared(const StateVector& v) {
  double s = 0.0;
  for (const cplx& c : v.coeffs) s += std::norm(c);
  return s;
}

double norm(const StateVector& v) { return std::sqrt(norm_squared(v)); }

std::vector<double> block_norms_squared(const StateVector& v) {
  std::vector<double> out(v.l_max + 1, 0.0);
  for (int l = 0; l <= v.l_max; ++l) {
    for (const cplx& c : v.block(l)) out[l] += std::norm(c);
  }
  return out;
}

ScaleState current_scale(const ScalingSchedule& schedule, double t) {
  return schedule.active() ? schedule.scale(t) : ScaleState{};
}

double simulated_radius(const RadialGrid& grid, const ScaleState& s) {
  const GridSpec& spec = grid.spec();
  return map_xi_to_r(spec.xi_max, s.R, spec.r_sigma);
}

DensitySnapshot density(const StateVector& v, const RadialGrid& grid,
                        const ScalingSchedule& schedule, double t,
                        const std::vector<double>& r) {
  check_state(v, grid);
  const ScaleState s = current_scale(schedule, t);
  const double r_sigma = grid.spec().r_sigma;
  const double r_end = simulated_radius(grid, s);
  DensitySnapshot out;
  out.t = t;
  out.r = r;
  out.rho.assign(r.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r[i];
    if (!(ri >= 0.0) || ri > r_end * (1.0 + 1e-14)) {
      throw DomainError("density: r = " + std::to_string(ri) +
                        " outside the simulated radius " + std::to_string(r_end));
    }
    const bool outer = ri > r_sigma;
    const double xi = std::min(map_r_to_xi(ri, s.R, r_sigma), grid.spec().xi_max);
    double rho = 0.0;
    for (int l = 0; l <= v.l_max; ++l) {
      rho += std::norm(evaluate_block(grid, v.block(l).data(), xi, s.R));
    }
    out.rho[i] = outer ? rho / s.R : rho;
  }
  return out;
}

std::vector<cplx> radial_function(const StateVector& v, const RadialGrid& grid,
                                  const ScalingSchedule& schedule, double t,
                                  int l, Representation rep,
                                  const std::vector<double>& r) {
  check_state(v, grid);
  if (l < 0 || l > v.l_max) throw DimensionError("radial_function: l out of range");
  const ScaleState s = current_scale(schedule, t);
  const double r_sigma = grid.spec().r_sigma;
  const double r_end = simulated_radius(grid, s);
  std::vector<cplx> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r[i];
    if (!(ri >= 0.0) || ri > r_end * (1.0 + 1e-14)) {
      throw DomainError("radial_function: r = " + std::to_string(ri) +
                        " outside the simulated radius");
    }
    const double xi = std::min(map_r_to_xi(ri, s.R, r_sigma), grid.spec().xi_max);
    const cplx phi = evaluate_block(grid, v.block(l).data(), xi, s.R);
    if (ri <= r_sigma) {
      out[i] = phi;
    } else if (rep == Representation::scaled) {
      out[i] = phi / std::sqrt(s.R);
    } else {
      out[i] = phi * phase_transform(xi, s, r_sigma, PhaseDirection::inverse);
    }
  }
  return out;
}

double dipole_acceleration(const StateVector& v, const RadialGrid& grid,
                           const AngularCoupling& coupling, const ScaleState& s,
                           double field) {
  check_state(v, grid);
  if (coupling.l_max() < v.l_max) {
    throw DimensionError("dipole_acceleration: coupling table too small");
  }
  const int n = grid.size();
  const double r_sigma = grid.spec().r_sigma;
  std::vector<double> inv_r2(n);
  for (int k = 0; k < n; ++k) {
    double r = grid.nodes()[k];
    switch (grid.basis_class(k)) {
      case BasisClass::inner: break;
      case BasisClass::bridge: r = r_sigma; break;
      case BasisClass::outer: r = map_xi_to_r(r, s.R, r_sigma); break;
    }
    inv_r2[k] = 1.0 / (r * r);
  }
  double acc = 0.0;
  for (int l = 0; l < v.l_max; ++l) {
    const auto a = v.block(l);
    const auto b = v.block(l + 1);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += (std::conj(a[k]) * b[k]).real() * inv_r2[k];
    }
    acc -= 2.0 * coupling.upper(l) * sum;
  }
  return acc - field * norm_squared(v);
}

double dipole_acceleration(const StateVector& v, const RadialGrid& grid,
                           const ScalingSchedule& schedule, const Pulse& pulse,
                           double t) {
  return dipole_acceleration(v, grid, AngularCoupling(v.l_max),
                             current_scale(schedule, t),
                             pulse.field_and_potential(t).field);
}

Spectrum hhg_spectrum(const std::vector<double>& a, double t0, double dt,
                      const std::vector<double>& omega, double up, bool hann) {
  if (a.empty()) throw InvalidSpec("hhg_spectrum: empty acceleration trace");
  if (!(dt > 0.0)) throw InvalidSpec("hhg_spectrum: dt must be > 0");
  const std::size_t m = a.size();
  std::vector<double> w(m, 1.0);
  if (m > 1) {
    w.front() = w.back() = 0.5;
    if (hann) {
      for (std::size_t k = 0; k < m; ++k) {
        const double s = std::sin(std::numbers::pi * k / (m - 1.0));
        w[k] *= s * s;
      }
    }
  }
  Spectrum out;
  out.omega = omega;
  out.s.resize(omega.size());
  out.omega_over_up.resize(omega.size());
  for (std::size_t j = 0; j < omega.size(); ++j) {
    const double om = omega[j];
    // Rotate the phase by recurrence; refresh periodically to bound drift.
    const cplx step = std::exp(cplx(0.0, om * dt));
    cplx phase = std::exp(cplx(0.0, om * t0));
    cplx sum{};
    for (std::size_t k = 0; k < m; ++k) {
      if (k % 1024 == 0) phase = std::exp(cplx(0.0, om * (t0 + k * dt)));
      sum += (w[k] * a[k]) * phase;
      phase *= step;
    }
    sum *= dt;
    out.s[j] = std::norm(sum);
    out.omega_over_up[j] = up > 0.0 ? om / up : 0.0;
  }
  return out;
}

}  // namespace ets
