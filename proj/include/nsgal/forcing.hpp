#pragma once

#include "nsgal/spectral_field.hpp"

#include <memory>
#include <vector>

namespace nsgal {

/// Time-dependent body force f in L^2(0,T;H): either constant in time or
/// sampled at increasing times and interpolated linearly in the coefficients.
/// Outside the sampled window the nearest sample is held.
class ForcingSpec {
 public:
  using Coefficients = SpectralField::Coefficients;

  static ForcingSpec zero(std::shared_ptr<const ModeSet> modes);
  static ForcingSpec constant(SpectralField field);
  static ForcingSpec sampled(std::vector<double> times, std::vector<SpectralField> fields);

  const ModeSet& modes() const { return fields_.front().modes(); }
  const std::shared_ptr<const ModeSet>& mode_set() const { return fields_.front().mode_set(); }

  bool is_constant() const { return times_.empty(); }
  bool is_zero() const;

  SpectralField at(double t) const;
  void coefficients_at(double t, Coefficients& out) const;

  const std::vector<double>& sample_times() const { return times_; }
  const std::vector<SpectralField>& samples() const { return fields_; }

  ForcingSpec scaled(double s) const;

  /// Exact pointwise difference; sampled operands are merged onto the union of
  /// their sample times, where both are piecewise linear.
  friend ForcingSpec operator-(const ForcingSpec& a, const ForcingSpec& b);
  friend ForcingSpec operator+(const ForcingSpec& a, const ForcingSpec& b);

 private:
  ForcingSpec(std::vector<double> times, std::vector<SpectralField> fields)
      : times_(std::move(times)), fields_(std::move(fields)) {}

  static ForcingSpec combine(const ForcingSpec& a, const ForcingSpec& b, double sign);

  std::vector<double> times_;  // empty for constant forcing
  std::vector<SpectralField> fields_;
};

}  // namespace nsgal
