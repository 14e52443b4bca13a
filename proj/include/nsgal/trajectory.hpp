#pragma once

#include "nsgal/forcing.hpp"
#include "nsgal/spectral_field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nsgal {

enum class Integrator {
  rk4,   // integrating factor + classical Runge-Kutta (Lawson)
  etd2,  // exponential time differencing, second order (Cox-Matthews)
};

enum class Interpolation { linear };

struct SolverConfig {
  double nu = 1.0;
  double T = 1.0;
  double dt = 1e-3;
  int cutoff = 2;
  double blowup_threshold = 1e6;
  Interpolation interpolation = Interpolation::linear;
  Integrator integrator = Integrator::rk4;
  /// Permits nu = 0; only meant for conservation probes of the nonlinearity.
  bool inviscid_test_mode = false;

  /// Throws ConfigError on nonpositive nu/T/dt/threshold, dt > T or cutoff < 1.
  void validate() const;
  /// Number of uniform steps; the step is shrunk to T / steps() if dt does not
  /// divide T.
  int steps() const;
  double step() const { return T / steps(); }
};

/// Per-sample norms and cumulative trapezoid integrals along a trajectory.
struct NormTrace {
  std::vector<double> times;
  std::vector<double> norm_H, norm_V, norm_DA, norm_L4;
  std::vector<double> int_V2;    // int_0^t |y|_V^2
  std::vector<double> int_f_y;   // int_0^t (f, y)
  std::vector<double> int_L4_8;  // int_0^t |y|_{L4}^8
};

enum class ExitStatus { completed, blow_up };

const char* to_string(ExitStatus s);
const char* to_string(Integrator i);

/// Solution samples y(t_n) on the uniform grid t_n = n T / N.
struct Trajectory {
  SolverConfig config;
  std::vector<double> times;
  std::vector<SpectralField> states;
  NormTrace norms;
  ExitStatus status = ExitStatus::completed;
  std::optional<double> t_star;
  std::vector<std::string> warnings;

  const ModeSet& modes() const { return states.front().modes(); }
  const std::shared_ptr<const ModeSet>& mode_set() const { return states.front().mode_set(); }
  std::size_t size() const { return states.size(); }

  /// Linear interpolation in the coefficients; clamps outside [t_0, t_N].
  void coefficients_at(double t, SpectralField::Coefficients& out) const;
  SpectralField at(double t) const;

  /// max_n |y(t_n)|_V
  double sup_V() const;

  /// Samples 0..count-1, with the norm trace recomputed.
  Trajectory restricted(std::size_t count, const ForcingSpec* forcing = nullptr) const;
};

NormTrace compute_norm_trace(const std::vector<double>& times, const std::vector<SpectralField>& states,
                             const ForcingSpec* forcing = nullptr);

/// Zero trajectory on the grid of `config`.
Trajectory zero_trajectory(std::shared_ptr<const ModeSet> modes, const SolverConfig& config);

/// Builds a trajectory from given samples (e.g. a frozen control or a
/// hand-modified run) and fills its norm trace.
Trajectory make_trajectory(const SolverConfig& config, std::vector<double> times, std::vector<SpectralField> states,
                           const ForcingSpec* forcing = nullptr);

/// Throws std::invalid_argument unless both trajectories share one time grid.
void require_matching_grids(const Trajectory& a, const Trajectory& b);

/// max over a's sample times of |a(t) - b(t)|_V, with b interpolated.
double sup_V_distance(const Trajectory& a, const Trajectory& b);

/// Pointwise a - b on a shared grid.
Trajectory difference(const Trajectory& a, const Trajectory& b);

}  // namespace nsgal
