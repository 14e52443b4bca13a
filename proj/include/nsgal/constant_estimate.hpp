#pragma once

#include "nsgal/spectral_field.hpp"

#include <cstdint>
#include <memory>
#include <optional>

namespace nsgal {

/// Empirical lower bounds for the constants of the trilinear-form inequalities
///   |b(u,v,w)|   <= c_b1 |u|_V |v|_V^{1/2} |v|_{D(A)}^{1/2} |w|_H
///   |b(u,v,w)|   <= c_b2 |u|_{D(A)}^{3/4} |u|_V^{1/4} |v|_V |w|_H
///   |b(u,v,Av)|  <= c1 |u|_{L4} |v|_V^{1/4} |v|_{D(A)}^{7/4}
///                <= (nu/2) |v|_{D(A)}^2 + c2 |u|_{L4}^8 |v|_V^2
/// on the current ModeSet. c2 depends on nu.
struct ConstantEstimate {
  double c_b1 = 0.0;
  double c_b2 = 0.0;
  double c = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double nu = 1.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// Per-sample ratio of |b| to the right-hand product; empty when the product
/// vanishes.
struct SampleRatios {
  std::optional<double> b1;
  std::optional<double> b2;
  std::optional<double> c1;
};

SampleRatios constant_ratios(const SpectralField& u, const SpectralField& v, const SpectralField& w);

/// Smallest c2 for which the Young splitting of the c1 bound holds for every
/// scaling of u: c2 = 7^7 c1^8 / (2^17 nu^7).
double c2_from_c1(double c1, double nu);

enum class Sampler {
  dense,        // u, v, w independent random fields with |y_k| ~ |k|^-decay
  adversarial,  // u, v with one to three active pairs, w = B(u, v)
};

struct EstimationOptions {
  double decay = 2.0;
  double nu = 1.0;
  int threads = 1;
  Sampler sampler = Sampler::dense;
};

/// Random field supported on `pairs` randomly chosen conjugate pairs.
SpectralField sparse_random_field(std::shared_ptr<const ModeSet> modes, std::uint64_t seed, int pairs);

/// Stream of per-sample seeds; sample i of a run with seed s always sees the
/// same fields, so a longer run extends a shorter one.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Running maximum of the sample ratios over `samples` random triples.
/// Throws EstimationError if every draw is degenerate.
///
/// For fixed (u, v) the ratio is largest at w = B(u, v), which is what the
/// adversarial sampler uses; it typically reports constants an order of
/// magnitude above the dense sampler.
ConstantEstimate estimate_constants(std::shared_ptr<const ModeSet> modes, int samples, std::uint64_t seed,
                                    const EstimationOptions& options = {});

}  // namespace nsgal
