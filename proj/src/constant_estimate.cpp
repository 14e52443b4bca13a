#include "nsgal/constant_estimate.hpp"

#include "nsgal/operators.hpp"
#include "nsgal/parallel.hpp"
#include "nsgal/physical_grid.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace nsgal {

namespace {

std::optional<double> ratio(double numerator, double denominator) {
  if (!(denominator > 0.0) || !std::isfinite(denominator)) return std::nullopt;
  return std::abs(numerator) / denominator;
}

void raise_to(double& target, const std::optional<double>& value) {
  if (value && *value > target) target = *value;
}

}  // namespace

SampleRatios constant_ratios(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  const double uV = norm_V(u), uDA = norm_DA(u), uL4 = norm_L4(u);
  const double vV = norm_V(v), vDA = norm_DA(v);
  const double wH = norm_H(w);
  const double b_uvw = trilinear_b(u, v, w);
  const double b_uvAv = trilinear_b(u, v, apply_A(v));

  SampleRatios r;
  r.b1 = ratio(b_uvw, uV * std::sqrt(vV * vDA) * wH);
  r.b2 = ratio(b_uvw, std::pow(uDA, 0.75) * std::pow(uV, 0.25) * vV * wH);
  r.c1 = ratio(b_uvAv, uL4 * std::pow(vV, 0.25) * std::pow(vDA, 1.75));
  return r;
}

SpectralField sparse_random_field(std::shared_ptr<const ModeSet> modes, std::uint64_t seed, int pairs) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<Eigen::Index> pick(modes->size() / 2, modes->size() - 1);
  SpectralField::Coefficients c = SpectralField::Coefficients::Zero(3, modes->size());
  for (int p = 0; p < pairs; ++p) {
    const Eigen::Index i = pick(rng);
    for (int d = 0; d < 3; ++d) {
      const double re = normal(rng);
      const double im = normal(rng);
      c(d, i) = {re, im};
    }
  }
  symmetrize<double>(*modes, c);
  project_divergence_free<double>(*modes, c);
  return {std::move(modes), std::move(c)};
}

double c2_from_c1(double c1, double nu) { return std::pow(7.0, 7) * std::pow(c1, 8) / (std::pow(2.0, 17) * std::pow(nu, 7)); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ConstantEstimate estimate_constants(std::shared_ptr<const ModeSet> modes, int samples, std::uint64_t seed,
                                    const EstimationOptions& options) {
  if (samples < 1) throw ConfigError("estimate_constants needs at least one sample");
  if (!(options.nu > 0.0)) throw ConfigError("nu must be positive");

  std::vector<SampleRatios> ratios(static_cast<std::size_t>(samples));
  parallel_for(ratios.size(), options.threads, [&](std::size_t i) {
    if (options.sampler == Sampler::dense) {
      const auto u = random_field(modes, derive_seed(seed, 3 * i), options.decay);
      const auto v = random_field(modes, derive_seed(seed, 3 * i + 1), options.decay);
      const auto w = random_field(modes, derive_seed(seed, 3 * i + 2), options.decay);
      ratios[i] = constant_ratios(u, v, w);
    } else {
      const int pairs = 1 + static_cast<int>(derive_seed(seed, 3 * i + 2) % 3);
      const auto u = sparse_random_field(modes, derive_seed(seed, 3 * i), pairs);
      const auto v = sparse_random_field(modes, derive_seed(seed, 3 * i + 1), pairs);
      ratios[i] = constant_ratios(u, v, bilinear_B(u, v));
    }
  });

  ConstantEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.nu = options.nu;
  bool any = false;
  for (const auto& r : ratios) {
    any = any || r.b1 || r.b2 || r.c1;
    raise_to(est.c_b1, r.b1);
    raise_to(est.c_b2, r.b2);
    raise_to(est.c1, r.c1);
  }
  if (!any) throw EstimationError("every sample triple was degenerate");
  est.c = std::max(est.c_b1, est.c_b2);
  est.c2 = c2_from_c1(est.c1, options.nu);
  return est;
}

}  // namespace nsgal
