#include "ets/pulse.hpp"

#include "ets/error.hpp"

#include <cmath>
#include <numbers>

namespace ets {

namespace units {
double wavelength_to_omega(double wavelength_nm) {
  const double lambda_bohr = wavelength_nm / bohr_nm;
  return 2.0 * std::numbers::pi / (fine_structure * lambda_bohr);
}

double intensity_to_au(double intensity_wcm2) {
  return intensity_wcm2 / intensity_au_wcm2;
}
}  // namespace units

PulseSpec PulseSpec::from_lab(double wavelength_nm, double intensity_wcm2,
                              double cycles, PulseShape shape, Gauge gauge) {
  PulseSpec s;
  s.omega = units::wavelength_to_omega(wavelength_nm);
  s.peak_field = std::sqrt(units::intensity_to_au(intensity_wcm2));
  s.cycles = cycles;
  s.shape = shape;
  s.gauge = gauge;
  return s;
}

Pulse::Pulse(const PulseSpec& spec) : spec_(spec) {
  if (!(spec_.omega > 0.0)) throw InvalidSpec("pulse: omega must be positive");
  if (!(spec_.cycles > 0.0)) throw InvalidSpec("pulse: cycles must be positive");
  if (spec_.peak_field < 0.0) throw InvalidSpec("pulse: peak field must be >= 0");
  if (spec_.shape == PulseShape::field && spec_.gauge == Gauge::velocity) {
    throw ConfigError(
        "pulse: a field-defined pulse has nonzero net area and requires the "
        "length gauge");
  }
  duration_ = 2.0 * std::numbers::pi * spec_.cycles / spec_.omega;
}

double Pulse::optical_cycle() const { return 2.0 * std::numbers::pi / spec_.omega; }

double Pulse::ponderomotive_energy() const {
  return spec_.peak_field * spec_.peak_field / (4.0 * spec_.omega * spec_.omega);
}

double Pulse::envelope(double t) const {
  if (t < 0.0 || t > duration_) return 0.0;
  const double s = std::sin(std::numbers::pi * t / duration_);
  return s * s;
}

namespace {
// int_0^t sin(k s) ds
double sin_integral(double k, double t) {
  if (k == 0.0) return 0.0;
  return (1.0 - std::cos(k * t)) / k;
}
}  // namespace

FieldValue Pulse::field_and_potential(double t) const {
  const double w = spec_.omega;
  const double f0 = spec_.peak_field;
  const double big_t = duration_;
  FieldValue out;
  switch (spec_.shape) {
    case PulseShape::none:
      return out;
    case PulseShape::vector_potential: {
      if (t < 0.0 || t > big_t) return out;
      const double a = std::numbers::pi / big_t;
      const double env = envelope(t);
      const double denv = a * std::sin(2.0 * a * t);
      out.potential = (f0 / w) * env * std::sin(w * t);
      out.field = -(f0 / w) * (denv * std::sin(w * t) + env * w * std::cos(w * t));
      return out;
    }
    case PulseShape::field: {
      // sin^2(a t) sin(w t) = sin(w t)/2 - [sin((w+2a)t) + sin((w-2a)t)]/4
      const double a = std::numbers::pi / big_t;
      const double tc = std::min(std::max(t, 0.0), big_t);
      if (t >= 0.0 && t <= big_t) out.field = -f0 * envelope(t) * std::sin(w * t);
      const double integral = 0.5 * sin_integral(w, tc) -
                              0.25 * (sin_integral(w + 2.0 * a, tc) +
                                      sin_integral(w - 2.0 * a, tc));
      out.potential = f0 * integral;
      return out;
    }
  }
  return out;
}

Gauge parse_gauge(const std::string& s) {
  if (s == "length") return Gauge::length;
  if (s == "velocity") return Gauge::velocity;
  throw ConfigError("unknown gauge '" + s + "' (expected length|velocity)");
}

PulseShape parse_pulse_shape(const std::string& s) {
  if (s == "vector_potential") return PulseShape::vector_potential;
  if (s == "field") return PulseShape::field;
  if (s == "none") return PulseShape::none;
  throw ConfigError("unknown pulse shape '" + s +
                    "' (expected vector_potential|field|none)");
}

std::string to_string(Gauge g) { return g == Gauge::length ? "length" : "velocity"; }

std::string to_string(PulseShape s) {
  switch (s) {
    case PulseShape::vector_potential: return "vector_potential";
    case PulseShape::field: return "field";
    case PulseShape::none: return "none";
  }
  return "none";
}

}  // namespace ets
