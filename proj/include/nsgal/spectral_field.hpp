#pragma once

#include "nsgal/errors.hpp"
#include "nsgal/mode_set.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace nsgal {

/// Tolerance of the incompressibility and reality invariants, relative to
/// max(1, |amplitude|).
inline constexpr double kInvariantTolerance = 1e-12;

template <typename Scalar>
using CoefficientMatrix = Eigen::Matrix<std::complex<Scalar>, 3, Eigen::Dynamic>;

/// Largest violation of the two per-mode invariants of a coefficient matrix.
struct InvariantDefect {
  double divergence = 0.0;  // max |k . y_k| / max(1, |y_k|)
  double asymmetry = 0.0;   // max |y_{-k} - conj(y_k)| / max(1, |y_k|)

  bool ok(double tol = kInvariantTolerance) const { return divergence <= tol && asymmetry <= tol; }
};

template <typename Scalar>
InvariantDefect invariant_defect(const ModeSet& modes, const CoefficientMatrix<Scalar>& c) {
  using std::abs;
  InvariantDefect d;
  for (Eigen::Index i = 0; i < modes.size(); ++i) {
    const auto k = modes.wavevector(i).template cast<Scalar>();
    const Scalar scale = std::max<Scalar>(Scalar(1), c.col(i).norm());
    const auto div = abs(k(0) * c(0, i) + k(1) * c(1, i) + k(2) * c(2, i)) / scale;
    const auto asym = (c.col(modes.negation(i)) - c.col(i).conjugate()).norm() / scale;
    d.divergence = std::max(d.divergence, static_cast<double>(div));
    d.asymmetry = std::max(d.asymmetry, static_cast<double>(asym));
  }
  return d;
}

template <typename Scalar>
void check_reality(const ModeSet& modes, const CoefficientMatrix<Scalar>& c) {
  if (c.cols() != modes.size()) {
    throw DataIntegrityError("coefficient count " + std::to_string(c.cols()) + " does not match mode set size " +
                             std::to_string(modes.size()));
  }
  const auto d = invariant_defect<Scalar>(modes, c);
  if (d.asymmetry > kInvariantTolerance) {
    throw DataIntegrityError("coefficients violate reality symmetry y_{-k} = conj(y_k) (defect " +
                             std::to_string(d.asymmetry) + ")");
  }
}

/// Sets y_{-k} to conj(y_k) for every k in the lexicographically upper half.
template <typename Scalar>
void symmetrize(const ModeSet& modes, CoefficientMatrix<Scalar>& c) {
  for (Eigen::Index i = modes.size() / 2; i < modes.size(); ++i) c.col(modes.negation(i)) = c.col(i).conjugate();
}

/// y_k <- (I - k k^T / |k|^2) y_k, mode by mode.
template <typename Scalar>
void project_divergence_free(const ModeSet& modes, CoefficientMatrix<Scalar>& c) {
  for (Eigen::Index i = 0; i < modes.size(); ++i) {
    const Eigen::Matrix<Scalar, 3, 1> k = modes.wavevector(i).template cast<Scalar>();
    const std::complex<Scalar> kdotc = k(0) * c(0, i) + k(1) * c(1, i) + k(2) * c(2, i);
    c.col(i) -= (kdotc / Scalar(modes.norm_squared(i))) * k.template cast<std::complex<Scalar>>();
  }
}

/// Divergence-free, real, mean-free periodic velocity field on [0, 2pi]^3,
///   y(x) = sum_k y_k exp(i k.x),
/// under the unit-mass measure so that ||y||_H^2 = sum_k |y_k|^2.
///
/// Construction validates the invariants; the object is immutable afterwards.
template <typename Scalar>
class BasicSpectralField {
 public:
  using Complex = std::complex<Scalar>;
  using Coefficients = CoefficientMatrix<Scalar>;

  /// Zero field.
  explicit BasicSpectralField(std::shared_ptr<const ModeSet> modes)
      : modes_(std::move(modes)), coeffs_(Coefficients::Zero(3, modes_->size())) {}

  /// Throws DataIntegrityError unless `coeffs` is real and divergence-free.
  BasicSpectralField(std::shared_ptr<const ModeSet> modes, Coefficients coeffs)
      : modes_(std::move(modes)), coeffs_(std::move(coeffs)) {
    check_reality<Scalar>(*modes_, coeffs_);
    const auto d = invariant_defect<Scalar>(*modes_, coeffs_);
    if (d.divergence > kInvariantTolerance) {
      throw DataIntegrityError("coefficients are not divergence-free (defect " + std::to_string(d.divergence) + ")");
    }
  }

  const ModeSet& modes() const { return *modes_; }
  const std::shared_ptr<const ModeSet>& mode_set() const { return modes_; }
  int cutoff() const { return modes_->cutoff(); }
  const Coefficients& coeffs() const { return coeffs_; }
  auto amplitude(Eigen::Index i) const { return coeffs_.col(i); }

  template <typename Other>
  BasicSpectralField<Other> cast() const {
    return BasicSpectralField<Other>(modes_, coeffs_.template cast<std::complex<Other>>());
  }

  friend BasicSpectralField operator+(const BasicSpectralField& a, const BasicSpectralField& b) {
    require_same_modes(a, b);
    return {a.modes_, a.coeffs_ + b.coeffs_};
  }
  friend BasicSpectralField operator-(const BasicSpectralField& a, const BasicSpectralField& b) {
    require_same_modes(a, b);
    return {a.modes_, a.coeffs_ - b.coeffs_};
  }
  friend BasicSpectralField operator*(Scalar s, const BasicSpectralField& a) { return {a.modes_, s * a.coeffs_}; }
  friend BasicSpectralField operator*(const BasicSpectralField& a, Scalar s) { return s * a; }

  friend bool operator==(const BasicSpectralField& a, const BasicSpectralField& b) {
    return same_modes(*a.modes_, *b.modes_) && a.coeffs_ == b.coeffs_;
  }

 private:
  static void require_same_modes(const BasicSpectralField& a, const BasicSpectralField& b) {
    if (!same_modes(*a.modes_, *b.modes_)) throw std::invalid_argument("fields live on different mode sets");
  }

  std::shared_ptr<const ModeSet> modes_;
  Coefficients coeffs_;
};

using SpectralField = BasicSpectralField<double>;

/// Leray projection of raw per-mode amplitudes onto divergence-free fields.
/// The input must already satisfy reality symmetry.
template <typename Scalar>
BasicSpectralField<Scalar> leray_project(std::shared_ptr<const ModeSet> modes, CoefficientMatrix<Scalar> raw) {
  check_reality<Scalar>(*modes, raw);
  project_divergence_free<Scalar>(*modes, raw);
  return BasicSpectralField<Scalar>(std::move(modes), std::move(raw));
}

template <typename Scalar>
BasicSpectralField<Scalar> leray_project(const BasicSpectralField<Scalar>& u) {
  return leray_project<Scalar>(u.mode_set(), u.coeffs());
}

/// (u, v)_H = sum_k u_k . conj(v_k).
template <typename Scalar>
Scalar inner(const BasicSpectralField<Scalar>& u, const BasicSpectralField<Scalar>& v) {
  if (!same_modes(u.modes(), v.modes())) throw std::invalid_argument("fields live on different mode sets");
  return (u.coeffs().array() * v.coeffs().array().conjugate()).sum().real();
}

namespace detail {
template <typename Scalar>
Scalar weighted_square_sum(const BasicSpectralField<Scalar>& u, int power) {
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < u.modes().size(); ++i) {
    Scalar w = 1;
    for (int p = 0; p < power; ++p) w *= Scalar(u.modes().norm_squared(i));
    sum += w * u.coeffs().col(i).squaredNorm();
  }
  return sum;
}
}  // namespace detail

template <typename Scalar>
Scalar norm_H(const BasicSpectralField<Scalar>& u) {
  using std::sqrt;
  return sqrt(detail::weighted_square_sum(u, 0));
}

/// ||u||_V = ||grad u||_{L^2}; on the mean-free torus sum_k |k|^2 |u_k|^2.
template <typename Scalar>
Scalar norm_V(const BasicSpectralField<Scalar>& u) {
  using std::sqrt;
  return sqrt(detail::weighted_square_sum(u, 1));
}

/// ||u||_{D(A)} = ||Au||_H = (sum_k |k|^4 |u_k|^2)^{1/2}.
template <typename Scalar>
Scalar norm_DA(const BasicSpectralField<Scalar>& u) {
  using std::sqrt;
  return sqrt(detail::weighted_square_sum(u, 2));
}

/// Deterministic random field with |y_k| ~ |k|^{-decay_exponent}.
SpectralField random_field(std::shared_ptr<const ModeSet> modes, std::uint64_t seed, double decay_exponent);

/// A real conjugate pair a e^{ik.x} + conj(a) e^{-ik.x}; `a` is projected.
SpectralField single_mode(std::shared_ptr<const ModeSet> modes, const Wavevector& k,
                          const Eigen::Vector3cd& amplitude);

/// (sin x1 cos x2, -cos x1 sin x2, 0) scaled by `amplitude`.
SpectralField taylor_green(std::shared_ptr<const ModeSet> modes, double amplitude = 1.0);

/// Copies a field onto a larger (or equal) mode set, zero-padding new modes.
SpectralField embed(const SpectralField& u, std::shared_ptr<const ModeSet> target);

}  // namespace nsgal
