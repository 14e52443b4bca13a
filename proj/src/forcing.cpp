#include "nsgal/forcing.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsgal {

ForcingSpec ForcingSpec::zero(std::shared_ptr<const ModeSet> modes) { return constant(SpectralField(std::move(modes))); }

ForcingSpec ForcingSpec::constant(SpectralField field) { return ForcingSpec({}, {std::move(field)}); }

ForcingSpec ForcingSpec::sampled(std::vector<double> times, std::vector<SpectralField> fields) {
  if (times.empty() || times.size() != fields.size()) throw std::invalid_argument("forcing needs one field per sample time");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("forcing sample times must be increasing");
    if (!same_modes(fields[i].modes(), fields[0].modes())) throw std::invalid_argument("forcing samples on different mode sets");
  }
  return ForcingSpec(std::move(times), std::move(fields));
}

bool ForcingSpec::is_zero() const {
  return std::all_of(fields_.begin(), fields_.end(), [](const SpectralField& f) { return f.coeffs().isZero(0.0); });
}

void ForcingSpec::coefficients_at(double t, Coefficients& out) const {
  if (times_.empty() || t <= times_.front()) {
    out = fields_.front().coeffs();
    return;
  }
  if (t >= times_.back()) {
    out = fields_.back().coeffs();
    return;
  }
  const auto hi = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  out = (1.0 - w) * fields_[lo].coeffs() + w * fields_[hi].coeffs();
}

SpectralField ForcingSpec::at(double t) const {
  Coefficients c;
  coefficients_at(t, c);
  return {mode_set(), std::move(c)};
}

ForcingSpec ForcingSpec::scaled(double s) const {
  std::vector<SpectralField> fields;
  fields.reserve(fields_.size());
  for (const auto& f : fields_) fields.push_back(s * f);
  return ForcingSpec(times_, std::move(fields));
}

ForcingSpec ForcingSpec::combine(const ForcingSpec& a, const ForcingSpec& b, double sign) {
  if (!same_modes(a.modes(), b.modes())) throw std::invalid_argument("forcings live on different mode sets");
  if (a.is_constant() && b.is_constant()) return constant(a.fields_[0] + sign * b.fields_[0]);
  std::vector<double> times = a.times_;
  times.insert(times.end(), b.times_.begin(), b.times_.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<SpectralField> fields;
  fields.reserve(times.size());
  for (double t : times) fields.push_back(a.at(t) + sign * b.at(t));
  return sampled(std::move(times), std::move(fields));
}

ForcingSpec operator-(const ForcingSpec& a, const ForcingSpec& b) { return ForcingSpec::combine(a, b, -1.0); }
ForcingSpec operator+(const ForcingSpec& a, const ForcingSpec& b) { return ForcingSpec::combine(a, b, 1.0); }

}  // namespace nsgal
