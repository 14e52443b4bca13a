#include "nsgal/spectral_field.hpp"

#include <random>

namespace nsgal {

SpectralField random_field(std::shared_ptr<const ModeSet> modes, std::uint64_t seed, double decay_exponent) {
  if (decay_exponent < 0) throw ConfigError("decay exponent must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SpectralField::Coefficients c(3, modes->size());
  for (Eigen::Index i = modes->size() / 2; i < modes->size(); ++i) {
    const double scale = std::pow(static_cast<double>(modes->norm_squared(i)), -0.5 * decay_exponent);
    for (int d = 0; d < 3; ++d) {
      const double re = normal(rng);
      const double im = normal(rng);
      c(d, i) = scale * std::complex<double>(re, im);
    }
  }
  symmetrize<double>(*modes, c);
  project_divergence_free<double>(*modes, c);
  symmetrize<double>(*modes, c);
  return {std::move(modes), std::move(c)};
}

SpectralField single_mode(std::shared_ptr<const ModeSet> modes, const Wavevector& k,
                          const Eigen::Vector3cd& amplitude) {
  const Eigen::Index i = modes->index_of(k);
  if (i < 0) throw ConfigError("wavevector outside the mode set");
  SpectralField::Coefficients c = SpectralField::Coefficients::Zero(3, modes->size());
  c.col(i) = amplitude;
  c.col(modes->negation(i)) = amplitude.conjugate();
  project_divergence_free<double>(*modes, c);
  return {std::move(modes), std::move(c)};
}

SpectralField taylor_green(std::shared_ptr<const ModeSet> modes, double amplitude) {
  using namespace std::complex_literals;
  SpectralField::Coefficients c = SpectralField::Coefficients::Zero(3, modes->size());
  const double q = 0.25 * amplitude;
  auto put = [&](int a, int b, std::complex<double> u1, std::complex<double> u2) {
    const Eigen::Index i = modes->index_of(Wavevector(a, b, 0));
    c(0, i) = u1;
    c(1, i) = u2;
  };
  put(1, 1, -1i * q, 1i * q);
  put(1, -1, -1i * q, -1i * q);
  put(-1, 1, 1i * q, 1i * q);
  put(-1, -1, 1i * q, -1i * q);
  return {std::move(modes), std::move(c)};
}

SpectralField embed(const SpectralField& u, std::shared_ptr<const ModeSet> target) {
  if (target->cutoff() < u.cutoff()) throw std::invalid_argument("embed target has a smaller cutoff");
  SpectralField::Coefficients c = SpectralField::Coefficients::Zero(3, target->size());
  for (Eigen::Index i = 0; i < u.modes().size(); ++i) c.col(target->index_of(u.modes().wavevector(i))) = u.coeffs().col(i);
  return {std::move(target), std::move(c)};
}

}  // namespace nsgal
