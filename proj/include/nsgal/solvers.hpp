#pragma once

#include "nsgal/forcing.hpp"
#include "nsgal/trajectory.hpp"

#include <memory>
#include <stdexcept>

namespace nsgal {

/// The V-norm exceeded SolverConfig::blowup_threshold (or became non-finite)
/// at time t_star. Carries the partial trajectory up to and including t_star.
class BlowUpDetected : public std::runtime_error {
 public:
  BlowUpDetected(double t_star, std::shared_ptr<const Trajectory> partial);
  double t_star() const { return t_star_; }
  const std::shared_ptr<const Trajectory>& partial() const { return partial_; }

 private:
  double t_star_;
  std::shared_ptr<const Trajectory> partial_;
};

/// Galerkin Navier-Stokes: dy/dt + nu A y + B(y, y) = f, y(0) = y0.
Trajectory solve_nse(const SpectralField& y0, const ForcingSpec& f, const SolverConfig& config);

/// Linear controlled system dy/dt + nu A y + B(z, y) = f with the control z
/// interpolated linearly in time.
Trajectory solve_controlled(const Trajectory& z, const SpectralField& y0, const ForcingSpec& f,
                            const SolverConfig& config);

/// Perturbation around a base trajectory y:
///   d eta/dt + nu A eta + B(eta, eta) + B(y, eta) + B(eta, y) = g - f.
Trajectory solve_perturbation(const Trajectory& y, const SpectralField& eta0, const ForcingSpec& g_minus_f,
                              const SolverConfig& config);

/// Advective guard value dt * K * max_t |y|_V; above 0.5 a warning is attached
/// to the trajectory.
double advective_number(const Trajectory& traj);

}  // namespace nsgal
