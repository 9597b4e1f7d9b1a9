#pragma once

#include "ets/angular.hpp"
#include "ets/grid.hpp"
#include "ets/pulse.hpp"
#include "ets/scaling.hpp"
#include "ets/types.hpp"

#include <vector>

namespace ets {

/// Squared Euclidean norm of the coefficients, which is the physical norm.
double norm_squared(const StateVector& v);
double norm(const StateVector& v);
std::vector<double> block_norms_squared(const StateVector& v);

/// R(t) state, or the identity map when the schedule is inactive.
ScaleState current_scale(const ScalingSchedule& schedule, double t);

/// r(xi_max, t): largest radius covered by the grid at time t.
double simulated_radius(const RadialGrid& grid, const ScaleState& s);

struct DensitySnapshot {
  double t = 0.0;
  std::vector<double> r;
  std::vector<double> rho;
};

/// rho(r, t) = sum_l |psi_l(r, t)|^2 on the given radii (unscaled).
/// Throws DomainError for radii outside [0, r(xi_max, t)].
DensitySnapshot density(const StateVector& v, const RadialGrid& grid,
                        const ScalingSchedule& schedule, double t,
                        const std::vector<double>& r);

enum class Representation { scaled, unscaled };

/// psi_l(r, t) with the full phase (unscaled), or phi_l(xi(r, t), t)/sqrt(R)
/// without the phase factor (scaled). Both coincide inside r_sigma.
std::vector<cplx> radial_function(const StateVector& v, const RadialGrid& grid,
                                  const ScalingSchedule& schedule, double t,
                                  int l, Representation rep,
                                  const std::vector<double>& r);

/// <dV/dz> part of the acceleration plus -F |psi|^2: the node sum of
/// -g conj(x_l) x_l' / r^2 with r the physical radius at each node.
double dipole_acceleration(const StateVector& v, const RadialGrid& grid,
                           const AngularCoupling& coupling, const ScaleState& s,
                           double field);
double dipole_acceleration(const StateVector& v, const RadialGrid& grid,
                           const ScalingSchedule& schedule, const Pulse& pulse,
                           double t);

struct Spectrum {
  std::vector<double> omega;
  std::vector<double> omega_over_up;
  std::vector<double> s;
};

/// S(W) = |int a(t) exp(i W t) dt|^2 by the trapezoidal rule on samples
/// a_k = a(t0 + k dt). With hann = true the samples are tapered first.
Spectrum hhg_spectrum(const std::vector<double>& a, double t0, double dt,
                      const std::vector<double>& omega, double up,
                      bool hann = false);

}  // namespace ets
