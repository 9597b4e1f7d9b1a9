#include "ets/scaling.hpp"

#include "ets/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ets {

ScalingSchedule::ScalingSchedule(double r_inf, double period, bool active)
    : r_inf_(r_inf), period_(period), active_(active) {
  if (r_inf < 0.0) throw InvalidSpec("scaling: R_inf must be >= 0");
  if (!(period > 0.0)) throw InvalidSpec("scaling: period must be positive");
}

ScaleState ScalingSchedule::scale(double t) const {
  ScaleState s;
  if (!active() || t <= 0.0) return s;
  const double big_t = period_;
  const double ri = r_inf_;
  if (t <= big_t) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double ph = two_pi * t / big_t;
    s.R = ri / (2.0 * big_t) *
              (t * t + big_t * big_t / (2.0 * std::numbers::pi * std::numbers::pi) *
                           (std::cos(ph) - 1.0)) +
          1.0;
    s.Rdot = ri / (2.0 * big_t) * (2.0 * t - big_t / std::numbers::pi * std::sin(ph));
    s.Rddot = ri / big_t * (1.0 - std::cos(ph));
  } else {
    s.R = ri * (t - big_t) + 0.5 * big_t * ri + 1.0;
    s.Rdot = ri;
    s.Rddot = 0.0;
  }
  return s;
}

double map_xi_to_r(double xi, double R, double r_sigma) {
  return xi <= r_sigma ? xi : r_sigma + R * (xi - r_sigma);
}

double map_r_to_xi(double r, double R, double r_sigma) {
  return r <= r_sigma ? r : r_sigma + (r - r_sigma) / R;
}

double map_xi_to_r(double xi, double t, double r_sigma,
                   const ScalingSchedule& schedule) {
  return map_xi_to_r(xi, schedule.scale(t).R, r_sigma);
}

double map_r_to_xi(double r, double t, double r_sigma,
                   const ScalingSchedule& schedule) {
  return map_r_to_xi(r, schedule.scale(t).R, r_sigma);
}

cplx phase_transform(double xi, const ScaleState& s, double r_sigma,
                     PhaseDirection direction) {
  if (!(xi > r_sigma)) {
    throw DomainError("phase_transform: xi = " + std::to_string(xi) +
                      " is not in the scaled region (r_sigma = " +
                      std::to_string(r_sigma) + ")");
  }
  const double d = xi - r_sigma;
  const double phase = -0.5 * s.R * s.Rdot * d * d;
  const double amp = std::sqrt(s.R);
  if (direction == PhaseDirection::forward) return std::polar(amp, phase);
  return std::polar(1.0 / amp, -phase);
}

cplx phase_transform(double xi, double t, double r_sigma,
                     const ScalingSchedule& schedule, PhaseDirection direction) {
  return phase_transform(xi, schedule.scale(t), r_sigma, direction);
}

}  // namespace ets
