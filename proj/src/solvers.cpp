#include "nsgal/solvers.hpp"

#include "nsgal/errors.hpp"
#include "nsgal/operators.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace nsgal {

BlowUpDetected::BlowUpDetected(double t_star, std::shared_ptr<const Trajectory> partial)
    : std::runtime_error("V-norm cap exceeded at t = " + std::to_string(t_star)),
      t_star_(t_star),
      partial_(std::move(partial)) {}

namespace {

using Coeffs = SpectralField::Coefficients;
using Rhs = std::function<void(double t, const Coeffs& y, Coeffs& out)>;

constexpr double kAdvectiveLimit = 0.5;

void scale_columns(Coeffs& c, const Eigen::VectorXd& s) {
  for (Eigen::Index i = 0; i < c.cols(); ++i) c.col(i) *= s(i);
}

Coeffs scaled(const Coeffs& c, const Eigen::VectorXd& s) {
  Coeffs out = c;
  scale_columns(out, s);
  return out;
}

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2 for z <= 0.
double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

double phi2(double z) {
  if (std::abs(z) < 1e-2) {
    double term = 0.5, sum = 0.5;
    for (int n = 3; n <= 10; ++n) {
      term *= z / n;
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

bool exceeds_cap(const Coeffs& y, const ModeSet& modes, double threshold) {
  double v2 = 0.0;
  for (Eigen::Index i = 0; i < y.cols(); ++i) v2 += modes.norm_squared(i) * y.col(i).squaredNorm();
  return !std::isfinite(v2) || std::sqrt(v2) > threshold;
}

// Integrates dy/dt + nu A y = N(t, y) where `rhs` supplies N.
Trajectory integrate(const SpectralField& y0, const ForcingSpec* trace_forcing, const SolverConfig& config,
                     const Rhs& rhs) {
  config.validate();
  if (y0.cutoff() != config.cutoff) throw ConfigError("initial field cutoff does not match SolverConfig::cutoff");
  const auto modes_ptr = y0.mode_set();
  const ModeSet& modes = *modes_ptr;
  const int steps = config.steps();
  const double h = config.step();
  const Eigen::Index m = modes.size();

  Eigen::VectorXd decay(m), decay_half(m), lin(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    lin(i) = config.nu * modes.norm_squared(i);
    decay(i) = std::exp(-lin(i) * h);
    decay_half(i) = std::exp(-0.5 * lin(i) * h);
  }
  Eigen::VectorXd etd1(m), etd2(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    etd1(i) = h * phi1(-lin(i) * h);
    etd2(i) = h * phi2(-lin(i) * h);
  }

  Trajectory traj;
  traj.config = config;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);

  Coeffs y = y0.coeffs();
  traj.times.push_back(0.0);
  traj.states.push_back(y0);
  bool blew_up = exceeds_cap(y, modes, config.blowup_threshold);

  Coeffs k1(3, m), k2(3, m), k3(3, m), k4(3, m), stage(3, m);
  for (int n = 0; n < steps && !blew_up; ++n) {
    const double t = config.T * n / steps;
    if (config.integrator == Integrator::rk4) {
      rhs(t, y, k1);
      stage = scaled(y + 0.5 * h * k1, decay_half);
      rhs(t + 0.5 * h, stage, k2);
      stage = scaled(y, decay_half) + 0.5 * h * k2;
      rhs(t + 0.5 * h, stage, k3);
      stage = scaled(y, decay) + h * scaled(k3, decay_half);
      rhs(t + h, stage, k4);
      y = scaled(y, decay) + (h / 6.0) * (scaled(k1, decay) + 2.0 * scaled(k2 + k3, decay_half) + k4);
    } else {
      rhs(t, y, k1);
      stage = scaled(y, decay) + scaled(k1, etd1);
      rhs(t + h, stage, k2);
      y = stage + scaled(k2 - k1, etd2);
    }
    symmetrize<double>(modes, y);
    const double t_next = config.T * (n + 1) / steps;
    blew_up = exceeds_cap(y, modes, config.blowup_threshold);
    traj.times.push_back(t_next);
    if (blew_up && !y.allFinite()) {
      // keep the last finite state so the trajectory stays a valid field sequence
      traj.states.push_back(traj.states.back());
    } else {
      traj.states.emplace_back(modes_ptr, y);
    }
  }

  traj.norms = compute_norm_trace(traj.times, traj.states, trace_forcing);
  const double adv = advective_number(traj);
  if (adv > kAdvectiveLimit) {
    std::ostringstream msg;
    msg << "advective stability number dt*K*max|y|_V = " << adv << " exceeds " << kAdvectiveLimit;
    traj.warnings.push_back(msg.str());
  }
  if (blew_up) {
    traj.status = ExitStatus::blow_up;
    traj.t_star = traj.times.back();
    auto partial = std::make_shared<const Trajectory>(std::move(traj));
    throw BlowUpDetected(*partial->t_star, partial);
  }
  return traj;
}

void require_covers(const Trajectory& z, const ModeSet& modes, const SolverConfig& config, const char* what) {
  if (z.states.empty()) throw std::invalid_argument(std::string(what) + " trajectory is empty");
  if (!same_modes(z.modes(), modes)) throw std::invalid_argument(std::string(what) + " trajectory lives on another mode set");
  if (z.status != ExitStatus::completed) throw std::invalid_argument(std::string(what) + " trajectory did not complete");
  if (z.times.front() > 1e-12 || z.times.back() < config.T * (1.0 - 1e-12)) {
    throw std::invalid_argument(std::string(what) + " trajectory does not cover [0, T]");
  }
}

}  // namespace

double advective_number(const Trajectory& traj) { return traj.config.step() * traj.config.cutoff * traj.sup_V(); }

Trajectory solve_nse(const SpectralField& y0, const ForcingSpec& f, const SolverConfig& config) {
  if (!same_modes(f.modes(), y0.modes())) throw std::invalid_argument("forcing lives on another mode set");
  const ModeSet& modes = y0.modes();
  Coeffs force;
  const bool constant = f.is_constant();
  if (constant) force = f.samples().front().coeffs();
  const Rhs rhs = [&](double t, const Coeffs& y, Coeffs& out) {
    out.setZero(3, y.cols());
    add_convection<double>(modes, y, y, out);
    project_divergence_free<double>(modes, out);
    if (!constant) f.coefficients_at(t, force);
    out = force - out;
  };
  return integrate(y0, &f, config, rhs);
}

Trajectory solve_controlled(const Trajectory& z, const SpectralField& y0, const ForcingSpec& f,
                            const SolverConfig& config) {
  if (!same_modes(f.modes(), y0.modes())) throw std::invalid_argument("forcing lives on another mode set");
  require_covers(z, y0.modes(), config, "control");
  const ModeSet& modes = y0.modes();
  Coeffs force, control;
  const Rhs rhs = [&](double t, const Coeffs& y, Coeffs& out) {
    z.coefficients_at(t, control);
    out.setZero(3, y.cols());
    add_convection<double>(modes, control, y, out);
    project_divergence_free<double>(modes, out);
    f.coefficients_at(t, force);
    out = force - out;
  };
  return integrate(y0, &f, config, rhs);
}

Trajectory solve_perturbation(const Trajectory& y, const SpectralField& eta0, const ForcingSpec& g_minus_f,
                              const SolverConfig& config) {
  if (!same_modes(g_minus_f.modes(), eta0.modes())) throw std::invalid_argument("forcing lives on another mode set");
  require_covers(y, eta0.modes(), config, "base");
  const ModeSet& modes = eta0.modes();
  Coeffs force, base;
  const Rhs rhs = [&](double t, const Coeffs& eta, Coeffs& out) {
    y.coefficients_at(t, base);
    out.setZero(3, eta.cols());
    add_convection<double>(modes, eta, eta, out);
    add_convection<double>(modes, base, eta, out);
    add_convection<double>(modes, eta, base, out);
    project_divergence_free<double>(modes, out);
    g_minus_f.coefficients_at(t, force);
    out = force - out;
  };
  return integrate(eta0, &g_minus_f, config, rhs);
}

}  // namespace nsgal
