#pragma once

#include <string>

namespace ets {

namespace units {
inline constexpr double fine_structure = 1.0 / 137.036;
inline constexpr double bohr_nm = 0.0529177210903;
/// W/cm^2 per atomic unit of intensity.
inline constexpr double intensity_au_wcm2 = 3.50944758e16;

/// omega = 2 pi / (alpha lambda), lambda in bohr.
double wavelength_to_omega(double wavelength_nm);
double intensity_to_au(double intensity_wcm2);
}  // namespace units

enum class Gauge { length, velocity };

/// vector_potential: A = (F0/omega) f_N sin(omega t), F = -dA/dt.
/// field:            F = -F0 f_N sin(omega t), A = -int_0^t F.
enum class PulseShape { vector_potential, field, none };

struct PulseSpec {
  double omega = 0.0;       // carrier angular frequency (a.u.)
  double peak_field = 0.0;  // F0 = sqrt(I) (a.u.)
  double cycles = 1.0;      // N, may be fractional
  PulseShape shape = PulseShape::none;
  Gauge gauge = Gauge::length;

  static PulseSpec from_lab(double wavelength_nm, double intensity_wcm2,
                            double cycles, PulseShape shape, Gauge gauge);
};

struct FieldValue {
  double field = 0.0;
  double potential = 0.0;
};

/// Linearly polarized pulse with a sin^2 envelope of total duration
/// T = 2 pi N / omega.
class Pulse {
 public:
  explicit Pulse(const PulseSpec& spec);

  const PulseSpec& spec() const { return spec_; }
  double duration() const { return duration_; }
  double optical_cycle() const;
  double ponderomotive_energy() const;

  /// sin^2(pi t / T) on [0, T], zero elsewhere.
  double envelope(double t) const;
  FieldValue field_and_potential(double t) const;

 private:
  PulseSpec spec_;
  double duration_;
};

Gauge parse_gauge(const std::string& s);
PulseShape parse_pulse_shape(const std::string& s);
std::string to_string(Gauge g);
std::string to_string(PulseShape s);

}  // namespace ets
