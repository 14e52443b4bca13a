#pragma once

#include "nsgal/physical_grid.hpp"
#include "nsgal/spectral_field.hpp"

#include <stdexcept>

namespace nsgal {

namespace detail {
template <typename Scalar>
void require_same_modes(const ModeSet& a, const ModeSet& b) {
  if (!same_modes(a, b)) throw std::invalid_argument("operands live on different mode sets");
}
}  // namespace detail

/// out += truncation of (u . grad) v onto the ModeSet, by direct summation over
/// the triads p + q = k. No projection is applied.
template <typename Scalar>
void add_convection(const ModeSet& modes, const CoefficientMatrix<Scalar>& u, const CoefficientMatrix<Scalar>& v,
                    CoefficientMatrix<Scalar>& out) {
  using Complex = std::complex<Scalar>;
  for (const auto& t : modes.triads()) {
    const auto& q = modes.wavevector(t.q);
    const Complex udotq = u(0, t.p) * Scalar(q[0]) + u(1, t.p) * Scalar(q[1]) + u(2, t.p) * Scalar(q[2]);
    const Complex s(-udotq.imag(), udotq.real());  // i (u_p . q)
    out(0, t.k) += s * v(0, t.q);
    out(1, t.k) += s * v(1, t.q);
    out(2, t.k) += s * v(2, t.q);
  }
}

/// Stokes operator: (Au)_k = |k|^2 u_k.
template <typename Scalar>
BasicSpectralField<Scalar> apply_A(const BasicSpectralField<Scalar>& u) {
  CoefficientMatrix<Scalar> c = u.coeffs();
  for (Eigen::Index i = 0; i < u.modes().size(); ++i) c.col(i) *= Scalar(u.modes().norm_squared(i));
  return {u.mode_set(), std::move(c)};
}

/// B(u, v) = P_K P_Leray (u . grad) v, the Galerkin advection operator.
template <typename Scalar>
BasicSpectralField<Scalar> bilinear_B(const BasicSpectralField<Scalar>& u, const BasicSpectralField<Scalar>& v) {
  detail::require_same_modes<Scalar>(u.modes(), v.modes());
  CoefficientMatrix<Scalar> c = CoefficientMatrix<Scalar>::Zero(3, u.modes().size());
  add_convection<Scalar>(u.modes(), u.coeffs(), v.coeffs(), c);
  project_divergence_free<Scalar>(u.modes(), c);
  symmetrize<Scalar>(u.modes(), c);
  return {u.mode_set(), std::move(c)};
}

/// Same operator as bilinear_B, computed in physical space: u and grad v are
/// sampled on an n^3 grid, multiplied pointwise, transformed back and
/// projected. Exact (free of aliasing on the retained modes) for n >= 3K+1.
template <typename Scalar>
BasicSpectralField<Scalar> bilinear_B_dealiased(const BasicSpectralField<Scalar>& u,
                                                const BasicSpectralField<Scalar>& v, int n = 0) {
  detail::require_same_modes<Scalar>(u.modes(), v.modes());
  const int exact = u.modes().exact_grid_size(3);
  if (n == 0) n = exact;
  if (n < exact) throw ConfigError("dealiased product needs at least 3K+1 points per axis");
  const GridTransform<Scalar> grid(u.modes(), n);
  const auto uu = grid.velocity(u);
  const auto dv = grid.gradient(v);
  CoefficientMatrix<Scalar> c(3, u.modes().size());
  for (int j = 0; j < 3; ++j) {
    const GridValues<Scalar> prod = uu[0] * dv[0][j] + uu[1] * dv[1][j] + uu[2] * dv[2][j];
    c.row(j) = grid.analyze(prod);
  }
  symmetrize<Scalar>(u.modes(), c);
  project_divergence_free<Scalar>(u.modes(), c);
  return {u.mode_set(), std::move(c)};
}

/// b(u, v, w) = integral of sum_ij u_i (d_i v_j) w_j over the unit-mass torus.
///
/// Evaluated by grid quadrature without any truncation of the product; the
/// integrand has degree 3K so the default n = 3K+1 is exact. For w in the
/// span of the ModeSet this equals (B(u, v), w)_H.
template <typename Scalar>
Scalar trilinear_b(const BasicSpectralField<Scalar>& u, const BasicSpectralField<Scalar>& v,
                   const BasicSpectralField<Scalar>& w, int n = 0) {
  detail::require_same_modes<Scalar>(u.modes(), v.modes());
  detail::require_same_modes<Scalar>(u.modes(), w.modes());
  const int exact = u.modes().exact_grid_size(3);
  if (n == 0) n = exact;
  if (n < exact) throw ConfigError("trilinear quadrature needs at least 3K+1 points per axis");
  const GridTransform<Scalar> grid(u.modes(), n);
  const auto uu = grid.velocity(u);
  const auto dv = grid.gradient(v);
  const auto ww = grid.velocity(w);
  GridValues<Scalar> integrand = GridValues<Scalar>::Zero(uu[0].size());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) integrand += uu[i] * dv[i][j] * ww[j];
  return integrand.mean();
}

}  // namespace nsgal
