#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ets {

using cplx = std::complex<double>;

/// Coefficient vector of the coupled radial problem.
///
/// Layout is block-major in angular momentum: block l holds the radial
/// coefficients in grid order (inner a_kl, then the bridge coefficient a_l,
/// then the outer b_kl). The bridge slot stores a_l, so the Euclidean norm
/// of `coeffs` equals the physical norm of the wave function.
struct StateVector {
  std::vector<cplx> coeffs;
  int l_max = 0;
  int radial_size = 0;
  double t = 0.0;

  StateVector() = default;
  StateVector(int l_max_, int radial_size_, double t_ = 0.0)
      : coeffs(static_cast<std::size_t>(l_max_ + 1) * radial_size_),
        l_max(l_max_),
        radial_size(radial_size_),
        t(t_) {}

  std::span<cplx> block(int l) {
    return {coeffs.data() + static_cast<std::size_t>(l) * radial_size,
            static_cast<std::size_t>(radial_size)};
  }
  std::span<const cplx> block(int l) const {
    return {coeffs.data() + static_cast<std::size_t>(l) * radial_size,
            static_cast<std::size_t>(radial_size)};
  }
  std::size_t size() const { return coeffs.size(); }
};

}  // namespace ets
