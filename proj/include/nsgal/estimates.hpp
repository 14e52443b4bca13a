#pragma once

#include "nsgal/forcing.hpp"
#include "nsgal/trajectory.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace nsgal {

/// Default relative slack of inequality checks, applied to max(|lhs|, |rhs|).
inline constexpr double kCheckTolerance = 1e-9;

/// Default multiplier applied to empirical (lower-bound) constants.
inline constexpr double kSafetyFactor = 2.0;

struct Check {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool passed = false;
  double t = std::numeric_limits<double>::quiet_NaN();  // grid time of the worst margin, if any
};

struct VerificationReport {
  std::string context;
  double safety_factor = 1.0;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  /// False when a stated precondition did not hold and the dependent
  /// inequality was not asserted.
  bool precondition_met = true;

  bool passed() const;
  const Check* find(const std::string& name) const;

  /// Records lhs <= rhs; passes iff rhs - lhs >= -tol * scale, where scale
  /// defaults to max(|lhs|, |rhs|).
  Check& add(std::string name, double lhs, double rhs, double tol = kCheckTolerance,
             std::optional<double> scale = std::nullopt, double t = std::numeric_limits<double>::quiet_NaN());
};

/// Tracks the worst margin of a family of lhs <= rhs comparisons over time.
class WorstCase {
 public:
  explicit WorstCase(double tol = kCheckTolerance) : tol_(tol) {}
  void observe(double lhs, double rhs, double t);
  void commit(VerificationReport& report, std::string name) const;

 private:
  double tol_;
  bool seen_ = false;
  double lhs_ = 0.0, rhs_ = 0.0, t_ = 0.0, score_ = 0.0;
};

struct StabilityConstants {
  double nu = 0.0;
  double T = 0.0;
  double c = 0.0;
  double C = 0.0;
  double delta = 0.0;
  std::optional<double> L;  // 1/delta, absent when delta underflowed
  double y_V_sup = 0.0;
  bool vacuous_ball = false;
};

/// V(y)(t) = 1/2 |y(t)|_H^2 + nu int_0^t |y|_V^2 - int_0^t (f, y), with
/// trapezoid time integrals on the trajectory grid.
std::vector<double> energy_functional(const Trajectory& traj, const ForcingSpec& f);

/// V(t) <= V(s) + tol (1 + |V(0)|) for all grid pairs s <= t.
VerificationReport check_energy_inequality(const Trajectory& traj, const ForcingSpec& f, double tol = 1e-6);

/// (int_0^T |y|_{L4}^8 dt)^{1/8} by the trapezoid rule.
double serrin_norm(const Trajectory& traj);

/// C = max{27c^4/(2nu^3), 7^8 c^8/(2^12 nu^7)} (y_V_sup^4 + 1)^2,
/// delta = min{1, nu/4} exp(-2TC), L = 1/delta.
StabilityConstants compute_constants(double c, double nu, double T, double y_V_sup);
StabilityConstants compute_constants(double c, double nu, double T, const Trajectory& y_traj);

/// Continuous dependence estimate around a base solution y:
///   |z-y|^2_{C(V)} + nu/2 int_0^T |z-y|^2_{D(A)} <= L (|z0-y0|_V^2 + |g-f|^2_{L2(H)})
/// asserted only when the data lies strictly inside the delta ball.
VerificationReport verify_lipschitz(const Trajectory& y_traj, const Trajectory& z_traj,
                                    const StabilityConstants& constants, const SpectralField& z0, const ForcingSpec& g,
                                    const SpectralField& y0, const ForcingSpec& f, double tol = kCheckTolerance);

/// Gronwall bounds for the controlled system with f = 0:
///   |y(t)|_V^2 <= |y0|_V^2 exp(2 c2 I(t)),
///   nu int_0^t |y|_{D(A)}^2 <= |y0|_V^2 (1 + 2 c2 exp(2 c2 I(t)) I(t)),
/// with I(t) = int_0^t |z|_{L4}^8. Skipped (and noted) when f != 0.
VerificationReport verify_gronwall(const Trajectory& y_traj, const Trajectory& z_traj, double c2, double nu,
                                   const ForcingSpec* f = nullptr);

/// The four Young-type bounds on the perturbation energy budget and the
/// integrated inequality for phi = min{|eta|_V^2, 1}, at every grid time.
VerificationReport verify_proof_estimates(const Trajectory& eta_traj, const Trajectory& y_traj,
                                          const ForcingSpec& g_minus_f, double c, double nu,
                                          const StabilityConstants& constants);

/// Solves with rk4 at dt and dt/2 and with etd2 at dt, and compares the
/// trajectories in sup_t |.|_V. Propagates BlowUpDetected.
VerificationReport cross_integrator_uniqueness(const SpectralField& y0, const ForcingSpec& f,
                                               const SolverConfig& config, double tol = 1e-5);

}  // namespace nsgal
