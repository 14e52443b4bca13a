#pragma once

#include "nsgal/spectral_field.hpp"

#include <cmath>
#include <complex>

namespace testing {

/// max over modes of |a_k - b_k|, component-wise.
inline double max_coeff_gap(const nsgal::SpectralField& a, const nsgal::SpectralField& b) {
  return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff();
}

/// Relative closeness with an absolute floor.
inline bool close(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs;
}

}  // namespace testing
