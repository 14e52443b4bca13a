#include "support.hpp"

#include "nsgal/operators.hpp"

#include <doctest.h>

using namespace nsgal;

namespace {

// Coefficients of P (u . grad) v for u = a e^{ip.x} + c.c., v = b e^{iq.x} + c.c.,
// written out by hand.
SpectralField pair_product(const std::shared_ptr<const ModeSet>& m, const Wavevector& p, const Eigen::Vector3cd& a,
                           const Wavevector& q, const Eigen::Vector3cd& b) {
  const std::complex<double> I(0, 1);
  SpectralField::Coefficients c = SpectralField::Coefficients::Zero(3, m->size());
  auto deposit = [&](const Wavevector& k, const Eigen::Vector3cd& amp) {
    const auto i = m->index_of(k);
    if (i < 0) return;
    const Eigen::Vector3d kd = k.cast<double>();
    const Eigen::Vector3cd projected = amp - kd.cast<std::complex<double>>() * (kd.dot(amp.real()) +
                                                                             I * kd.dot(amp.imag())) / kd.squaredNorm();
    c.col(i) += projected;
  };
  const Eigen::Vector3d qd = q.cast<double>();
  const std::complex<double> aq = qd.cast<std::complex<double>>().dot(a);  // a . q, q real
  const Eigen::Vector3cd sum_amp = I * aq * b;
  const Eigen::Vector3cd diff_amp = -I * aq * b.conjugate();
  deposit(p + q, sum_amp);
  deposit(-(p + q), sum_amp.conjugate());
  deposit(p - q, diff_amp);
  deposit(q - p, diff_amp.conjugate());
  return SpectralField(m, c);
}

}  // namespace

TEST_CASE("stokes operator scales each mode by |k|^2") {
  const auto m = ModeSet::with_cutoff(2);
  const auto u = random_field(m, 1, 1.0);
  const auto au = apply_A(u);
  for (Eigen::Index i = 0; i < m->size(); ++i)
    CHECK((au.coeffs().col(i) - double(m->norm_squared(i)) * u.coeffs().col(i)).norm() <= 1e-14);
  CHECK(inner(au, u) == doctest::Approx(norm_V(u) * norm_V(u)));
  CHECK(norm_H(au) == doctest::Approx(norm_DA(u)));
}

TEST_CASE("B on two conjugate pairs matches the hand expansion") {
  const auto m = ModeSet::with_cutoff(2);
  const Wavevector p(1, 0, 0), q(0, 1, 1);
  const auto u = single_mode(m, p, Eigen::Vector3cd({0, 0}, {0.3, 0.2}, {-0.5, 0.1}));
  const auto v = single_mode(m, q, Eigen::Vector3cd({0.7, -0.4}, {0.2, 0.3}, {-0.2, -0.3}));
  const auto ip = m->index_of(p), iq = m->index_of(q);
  const auto expected = pair_product(m, p, u.coeffs().col(ip), q, v.coeffs().col(iq));
  CHECK(testing::max_coeff_gap(bilinear_B(u, v), expected) <= 1e-15);
  CHECK(norm_H(expected) > 0.1);
}

TEST_CASE("modes leaving the cutoff are truncated") {
  const auto m = ModeSet::with_cutoff(1);
  const Wavevector p(1, 0, 0), q(1, 1, 0);
  const auto u = single_mode(m, p, Eigen::Vector3cd(0, 1, 0));
  const auto v = single_mode(m, q, Eigen::Vector3cd(0, 0, 1));
  // p + q = (2,1,0) is outside; only p - q survives
  const auto expected = pair_product(m, p, u.coeffs().col(m->index_of(p)), q, v.coeffs().col(m->index_of(q)));
  CHECK(testing::max_coeff_gap(bilinear_B(u, v), expected) <= 1e-15);
}

TEST_CASE("direct convolution and dealiased grid product agree") {
  const auto m = ModeSet::with_cutoff(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto u = random_field(m, 2 * s, 1.0);
    const auto v = random_field(m, 2 * s + 1, 1.0);
    CHECK(testing::max_coeff_gap(bilinear_B(u, v), bilinear_B_dealiased(u, v)) <= 1e-12);
  }
  const auto u = random_field(m, 1, 1.0);
  CHECK_THROWS_AS(bilinear_B_dealiased(u, u, 6), ConfigError);
  CHECK_NOTHROW(bilinear_B_dealiased(u, u, 9));
}

TEST_CASE("taylor-green self advection is a pure gradient") {
  const auto m = ModeSet::with_cutoff(2);
  const auto u = taylor_green(m, 1.3);
  CHECK(norm_H(bilinear_B(u, u)) <= 1e-15);
}

TEST_CASE("skew symmetry b(u, v, v) = 0 and b(u, v, w) = -b(u, w, v)") {
  const auto m = ModeSet::with_cutoff(2);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto u = random_field(m, 3 * s, 1.0);
    const auto v = random_field(m, 3 * s + 1, 0.5);
    const auto w = random_field(m, 3 * s + 2, 1.5);
    const double scale = norm_V(u) * norm_V(v) * norm_V(w);
    CHECK(std::abs(trilinear_b(u, v, v)) <= 1e-12 * scale);
    CHECK(std::abs(inner(bilinear_B(u, v), v)) <= 1e-12 * scale);
    CHECK(std::abs(trilinear_b(u, v, w) + trilinear_b(u, w, v)) <= 1e-12 * scale);
  }
}

TEST_CASE("duality: b(u, v, w) = (B(u, v), w)") {
  const auto m = ModeSet::with_cutoff(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto u = random_field(m, 100 + 3 * s, 1.0);
    const auto v = random_field(m, 101 + 3 * s, 1.0);
    const auto w = random_field(m, 102 + 3 * s, 1.0);
    const double scale = norm_V(u) * norm_V(v) * norm_V(w);
    CHECK(std::abs(trilinear_b(u, v, w) - inner(bilinear_B(u, v), w)) <= 1e-12 * scale);
  }
}

TEST_CASE("B is bilinear") {
  const auto m = ModeSet::with_cutoff(2);
  const auto u = random_field(m, 1, 1.0), u2 = random_field(m, 2, 1.0), v = random_field(m, 3, 1.0);
  const auto lhs = bilinear_B(u + 2.0 * u2, v);
  const auto rhs = bilinear_B(u, v) + 2.0 * bilinear_B(u2, v);
  CHECK(testing::max_coeff_gap(lhs, rhs) <= 1e-13);
}

TEST_CASE("double and extended precision agree") {
  const auto m = ModeSet::with_cutoff(2);
  const auto u = random_field(m, 8, 1.0), v = random_field(m, 9, 1.0);
  const auto bd = bilinear_B(u, v);
  const auto bl = bilinear_B(u.cast<long double>(), v.cast<long double>());
  CHECK(testing::max_coeff_gap(bl.cast<double>(), bd) <= 1e-14);
}

TEST_CASE("operands on different mode sets are rejected") {
  const auto u = random_field(ModeSet::with_cutoff(2), 1, 1.0);
  const auto v = random_field(ModeSet::with_cutoff(3), 1, 1.0);
  CHECK_THROWS_AS(bilinear_B(u, v), std::invalid_argument);
  CHECK_THROWS_AS(trilinear_b(u, u, v), std::invalid_argument);
  CHECK_THROWS_AS(trilinear_b(u, u, u, 4), ConfigError);
}

TEST_CASE("trilinear form on a resonant single-mode triple") {
  const auto m = ModeSet::with_cutoff(2);
  const Wavevector p(1, 0, 0), q(0, 1, 0), r(-1, -1, 0);
  const auto u = single_mode(m, p, Eigen::Vector3cd({0, 0}, {0.4, 0.1}, {0.2, -0.3}));
  const auto v = single_mode(m, q, Eigen::Vector3cd({0.5, 0.2}, {0, 0}, {-0.1, 0.6}));
  const auto w = single_mode(m, r, Eigen::Vector3cd({0.3, -0.2}, {-0.3, 0.2}, {0.7, 0.1}));
  const Eigen::Vector3cd a = u.coeffs().col(m->index_of(p));
  const Eigen::Vector3cd b = v.coeffs().col(m->index_of(q));
  const Eigen::Vector3cd c = w.coeffs().col(m->index_of(r));
  // only p + q + r = 0 and its negative resonate: b = 2 Re[i (a.q)(b.c)]
  const std::complex<double> aq = q.cast<double>().cast<std::complex<double>>().dot(a);
  const std::complex<double> bc = (b.array() * c.array()).sum();
  const double expected = 2.0 * (std::complex<double>(0, 1) * aq * bc).real();
  CHECK(std::abs(expected) > 0.01);
  CHECK(std::abs(trilinear_b(u, v, w) - expected) <= 1e-10);
  CHECK(trilinear_b(SpectralField(m), v, w) == 0.0);
}
