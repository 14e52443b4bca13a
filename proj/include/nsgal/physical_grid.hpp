#pragma once

#include "nsgal/spectral_field.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace nsgal {

/// Real samples on a uniform n^3 grid of [0, 2pi)^3, index (j1 * n + j2) * n + j3.
template <typename Scalar>
using GridValues = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Separable direct Fourier transform between a ModeSet and an n^3 grid.
/// Exact (no FFT); cost O(n^3 (2K+1)) per component.
template <typename Scalar>
class GridTransform {
 public:
  using Complex = std::complex<Scalar>;
  using Row = Eigen::Matrix<Complex, 1, Eigen::Dynamic>;

  GridTransform(const ModeSet& modes, int n) : modes_(modes), n_(n), side_(2 * modes.cutoff() + 1) {
    if (n < 1) throw ConfigError("grid size must be positive");
    phase_.resize(static_cast<std::size_t>(n_ * side_));
    const Scalar h = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n_);
    for (int j = 0; j < n_; ++j) {
      for (int m = 0; m < side_; ++m) {
        // reduce the phase index exactly before converting to an angle
        const long idx = (static_cast<long>(j) * (m - modes.cutoff())) % n_;
        phase_[static_cast<std::size_t>(j * side_ + m)] = std::polar(Scalar(1), h * Scalar(idx));
      }
    }
  }

  int size() const { return n_; }

  /// Values of sum_k c_k exp(ik.x) at the grid points (real part).
  GridValues<Scalar> synthesize(const Row& coeffs) const {
    const int K = modes_.cutoff();
    const std::size_t s = static_cast<std::size_t>(side_);
    const std::size_t n = static_cast<std::size_t>(n_);
    std::vector<Complex> cube(s * s * s, Complex(0));
    for (Eigen::Index i = 0; i < modes_.size(); ++i) {
      const auto& k = modes_.wavevector(i);
      cube[((k[0] + K) * s + (k[1] + K)) * s + (k[2] + K)] = coeffs(i);
    }
    // axis 3
    std::vector<Complex> t1(s * s * n, Complex(0));
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t c = 0; c < s; ++c) {
          const Complex v = cube[(a * s + b) * s + c];
          if (v == Complex(0)) continue;
          for (std::size_t j = 0; j < n; ++j) t1[(a * s + b) * n + j] += v * phase(j, c);
        }
    // axis 2
    std::vector<Complex> t2(s * n * n, Complex(0));
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t j2 = 0; j2 < n; ++j2) {
          const Complex e = phase(j2, b);
          for (std::size_t j3 = 0; j3 < n; ++j3) t2[(a * n + j2) * n + j3] += t1[(a * s + b) * n + j3] * e;
        }
    // axis 1
    GridValues<Scalar> out = GridValues<Scalar>::Zero(static_cast<Eigen::Index>(n * n * n));
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t j1 = 0; j1 < n; ++j1) {
        const Complex e = phase(j1, a);
        for (std::size_t r = 0; r < n * n; ++r) out(static_cast<Eigen::Index>(j1 * n * n + r)) += (t2[a * n * n + r] * e).real();
      }
    return out;
  }

  /// Discrete Fourier coefficients (1/n^3) sum_x g(x) exp(-ik.x) for every mode.
  Row analyze(const GridValues<Scalar>& g) const {
    const int K = modes_.cutoff();
    const std::size_t s = static_cast<std::size_t>(side_);
    const std::size_t n = static_cast<std::size_t>(n_);
    // axis 1
    std::vector<Complex> u1(s * n * n, Complex(0));
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t j1 = 0; j1 < n; ++j1) {
        const Complex e = std::conj(phase(j1, a));
        for (std::size_t r = 0; r < n * n; ++r) u1[a * n * n + r] += g(static_cast<Eigen::Index>(j1 * n * n + r)) * e;
      }
    // axis 2
    std::vector<Complex> u2(s * s * n, Complex(0));
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t j2 = 0; j2 < n; ++j2) {
          const Complex e = std::conj(phase(j2, b));
          for (std::size_t j3 = 0; j3 < n; ++j3) u2[(a * s + b) * n + j3] += u1[(a * n + j2) * n + j3] * e;
        }
    // axis 3, evaluated only at the retained modes
    const Scalar inv_volume = Scalar(1) / Scalar(n * n * n);
    Row out(modes_.size());
    for (Eigen::Index i = 0; i < modes_.size(); ++i) {
      const auto& k = modes_.wavevector(i);
      const std::size_t a = static_cast<std::size_t>(k[0] + K), b = static_cast<std::size_t>(k[1] + K),
                        c = static_cast<std::size_t>(k[2] + K);
      Complex sum(0);
      for (std::size_t j3 = 0; j3 < n; ++j3) sum += u2[(a * s + b) * n + j3] * std::conj(phase(j3, c));
      out(i) = sum * inv_volume;
    }
    return out;
  }

  /// The three velocity components on the grid.
  std::array<GridValues<Scalar>, 3> velocity(const BasicSpectralField<Scalar>& u) const {
    return {synthesize(u.coeffs().row(0)), synthesize(u.coeffs().row(1)), synthesize(u.coeffs().row(2))};
  }

  /// d u_j / d x_i on the grid, indexed [i][j].
  std::array<std::array<GridValues<Scalar>, 3>, 3> gradient(const BasicSpectralField<Scalar>& u) const {
    std::array<std::array<GridValues<Scalar>, 3>, 3> out;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        Row d(modes_.size());
        for (Eigen::Index m = 0; m < modes_.size(); ++m)
          d(m) = Complex(0, Scalar(modes_.wavevector(m)[i])) * u.coeffs()(j, m);
        out[i][j] = synthesize(d);
      }
    }
    return out;
  }

 private:
  const Complex& phase(std::size_t j, std::size_t m) const { return phase_[j * static_cast<std::size_t>(side_) + m]; }

  const ModeSet& modes_;
  int n_;
  int side_;
  std::vector<Complex> phase_;
};

/// Spatial L^4 norm (mean of |y|^4)^{1/4} by trapezoid quadrature on an n^3
/// grid. |y|^4 has degree 4K, so any n >= 4K+1 integrates it exactly; n = 0
/// selects 4K+1.
template <typename Scalar>
Scalar norm_L4(const BasicSpectralField<Scalar>& u, int n = 0) {
  const int exact = u.modes().exact_grid_size(4);
  if (n == 0) n = exact;
  if (n < exact) {
    throw ConfigError("L4 quadrature grid " + std::to_string(n) + " is below the exactness threshold " +
                      std::to_string(exact));
  }
  const GridTransform<Scalar> grid(u.modes(), n);
  const auto v = grid.velocity(u);
  const GridValues<Scalar> sq = v[0].square() + v[1].square() + v[2].square();
  using std::pow;
  using std::sqrt;
  return sqrt(sqrt(sq.square().mean()));
}

/// ||y||_{L^2} by grid quadrature (exact for n >= 2K+1); independent of the
/// spectral Parseval sum.
template <typename Scalar>
Scalar norm_L2_quadrature(const BasicSpectralField<Scalar>& u, int n = 0) {
  const int exact = u.modes().exact_grid_size(2);
  if (n == 0) n = exact;
  if (n < exact) throw ConfigError("L2 quadrature grid below the exactness threshold");
  const GridTransform<Scalar> grid(u.modes(), n);
  const auto v = grid.velocity(u);
  using std::sqrt;
  return sqrt((v[0].square() + v[1].square() + v[2].square()).mean());
}

}  // namespace nsgal
