#include "nsgal/trajectory.hpp"

#include "nsgal/errors.hpp"
#include "nsgal/physical_grid.hpp"
#include "nsgal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsgal {

void SolverConfig::validate() const {
  if (!(nu > 0.0) && !(inviscid_test_mode && nu == 0.0)) throw ConfigError("nu must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T must be positive and finite");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (dt > T * (1.0 + 1e-12)) throw ConfigError("dt must not exceed T");
  if (cutoff < 1) throw ConfigError("cutoff K must be a positive integer");
  if (!(blowup_threshold > 0.0)) throw ConfigError("blowup_threshold must be positive");
}

int SolverConfig::steps() const { return std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9))); }

const char* to_string(ExitStatus s) { return s == ExitStatus::completed ? "completed" : "blow_up"; }
const char* to_string(Integrator i) { return i == Integrator::rk4 ? "rk4" : "etd2"; }

void Trajectory::coefficients_at(double t, SpectralField::Coefficients& out) const {
  if (t <= times.front()) {
    out = states.front().coeffs();
    return;
  }
  if (t >= times.back()) {
    out = states.back().coeffs();
    return;
  }
  const auto hi = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  if (w == 0.0) {
    out = states[lo].coeffs();
    return;
  }
  out = (1.0 - w) * states[lo].coeffs() + w * states[hi].coeffs();
}

SpectralField Trajectory::at(double t) const {
  SpectralField::Coefficients c;
  coefficients_at(t, c);
  return {mode_set(), std::move(c)};
}

double Trajectory::sup_V() const {
  return norms.norm_V.empty() ? 0.0 : *std::max_element(norms.norm_V.begin(), norms.norm_V.end());
}

Trajectory Trajectory::restricted(std::size_t count, const ForcingSpec* forcing) const {
  if (count == 0 || count > states.size()) throw std::invalid_argument("restriction length out of range");
  Trajectory out;
  out.config = config;
  out.config.T = times[count - 1];
  out.times.assign(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(count));
  out.states.assign(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(count));
  out.norms = compute_norm_trace(out.times, out.states, forcing);
  return out;
}


NormTrace compute_norm_trace(const std::vector<double>& times, const std::vector<SpectralField>& states,
                             const ForcingSpec* forcing) {
  NormTrace n;
  n.times = times;
  const std::size_t count = states.size();
  n.norm_H.resize(count);
  n.norm_V.resize(count);
  n.norm_DA.resize(count);
  n.norm_L4.resize(count);
  std::vector<double> v2(count), fy(count, 0.0), l48(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& y = states[i];
    n.norm_H[i] = norm_H(y);
    n.norm_V[i] = norm_V(y);
    n.norm_DA[i] = norm_DA(y);
    n.norm_L4[i] = norm_L4(y);
    v2[i] = n.norm_V[i] * n.norm_V[i];
    l48[i] = std::pow(n.norm_L4[i], 8);
    if (forcing) fy[i] = inner(forcing->at(times[i]), y);
  }
  n.int_V2 = cumulative_trapezoid(times, v2);
  n.int_f_y = cumulative_trapezoid(times, fy);
  n.int_L4_8 = cumulative_trapezoid(times, l48);
  return n;
}

Trajectory zero_trajectory(std::shared_ptr<const ModeSet> modes, const SolverConfig& config) {
  config.validate();
  const int steps = config.steps();
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) times[static_cast<std::size_t>(i)] = config.T * i / steps;
  std::vector<SpectralField> states(times.size(), SpectralField(modes));
  return make_trajectory(config, std::move(times), std::move(states));
}

Trajectory make_trajectory(const SolverConfig& config, std::vector<double> times, std::vector<SpectralField> states,
                           const ForcingSpec* forcing) {
  if (times.empty() || times.size() != states.size()) throw std::invalid_argument("one state per sample time required");
  Trajectory out;
  out.config = config;
  out.times = std::move(times);
  out.states = std::move(states);
  out.norms = compute_norm_trace(out.times, out.states, forcing);
  return out;
}

void require_matching_grids(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size()) throw std::invalid_argument("trajectories have different sample counts");
  const double scale = std::max(1.0, std::abs(a.times.back()));
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * scale) throw std::invalid_argument("trajectories use different time grids");
  }
  if (!same_modes(a.modes(), b.modes())) throw std::invalid_argument("trajectories live on different mode sets");
}

double sup_V_distance(const Trajectory& a, const Trajectory& b) {
  if (!same_modes(a.modes(), b.modes())) throw std::invalid_argument("trajectories live on different mode sets");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.times.size(); ++i) worst = std::max(worst, norm_V(a.states[i] - b.at(a.times[i])));
  return worst;
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  require_matching_grids(a, b);
  std::vector<SpectralField> states;
  states.reserve(a.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) states.push_back(a.states[i] - b.states[i]);
  return make_trajectory(a.config, a.times, std::move(states));
}

}  // namespace nsgal
