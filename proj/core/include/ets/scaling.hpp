#pragma once

#include "ets/types.hpp"

namespace ets {

/// R(t) and its first two time derivatives.
struct ScaleState {
  double R = 1.0;
  double Rdot = 0.0;
  double Rddot = 0.0;
};

/// Envelope-matched scaling schedule.
///
/// During [0, T] the acceleration follows the pulse envelope,
/// Rddot = (2 R_inf / T) sin^2(pi t / T); afterwards R grows linearly with
/// slope R_inf. An inactive schedule (or R_inf = 0) keeps R = 1.
class ScalingSchedule {
 public:
  ScalingSchedule() = default;
  ScalingSchedule(double r_inf, double period, bool active = true);

  ScaleState scale(double t) const;

  double r_inf() const { return r_inf_; }
  double period() const { return period_; }
  bool active() const { return active_ && r_inf_ > 0.0; }

 private:
  double r_inf_ = 0.0;
  double period_ = 1.0;
  bool active_ = false;
};

/// r = xi inside r_sigma, r = r_sigma + R (xi - r_sigma) outside.
double map_xi_to_r(double xi, double R, double r_sigma);
double map_r_to_xi(double r, double R, double r_sigma);
double map_xi_to_r(double xi, double t, double r_sigma,
                   const ScalingSchedule& schedule);
double map_r_to_xi(double r, double t, double r_sigma,
                   const ScalingSchedule& schedule);

enum class PhaseDirection { forward, inverse };

/// forward: sqrt(R) exp[-i R Rdot (xi - r_sigma)^2 / 2], mapping psi -> phi.
/// inverse: the reciprocal, mapping phi -> psi. Requires xi > r_sigma.
cplx phase_transform(double xi, const ScaleState& s, double r_sigma,
                     PhaseDirection direction);
cplx phase_transform(double xi, double t, double r_sigma,
                     const ScalingSchedule& schedule, PhaseDirection direction);

}  // namespace ets
