#include "nsgal/continuation.hpp"

#include "nsgal/errors.hpp"
#include "nsgal/parallel.hpp"
#include "nsgal/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsgal {

const char* to_string(SolveStatus s) { return s == SolveStatus::converged ? "converged" : "blow_up"; }
const char* to_string(Verdict v) {
  return v == Verdict::all_solved_bounded ? "all-solved-bounded" : "unbounded-family-evidence";
}

std::vector<double> uniform_lambda_grid(int points) {
  if (points < 2) throw ConfigError("a lambda grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  return grid;
}

SweepReport lambda_sweep(const SpectralField& y0, const ForcingSpec& f, const std::vector<double>& lambdas,
                         const SolverConfig& config, const SweepOptions& options) {
  if (lambdas.empty()) throw ConfigError("empty lambda grid");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0 || lambdas[i] > 1.0) throw ConfigError("lambda values must lie in [0, 1]");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw ConfigError("lambda grid must be increasing");
  }
  if (lambdas.front() != 0.0 || lambdas.back() != 1.0) throw ConfigError("lambda grid must contain 0 and 1");

  SweepReport report;
  report.evidence_threshold = options.serrin_evidence_threshold;
  report.entries.resize(lambdas.size());
  std::vector<std::optional<Trajectory>> solutions(lambdas.size());

  parallel_for(lambdas.size(), options.threads, [&](std::size_t i) {
    const double lambda = lambdas[i];
    SweepEntry& e = report.entries[i];
    e.lambda = lambda;
    try {
      auto traj = solve_nse(lambda * y0, f.scaled(lambda), config);
      e.serrin = serrin_norm(traj);
      e.sup_V = traj.sup_V();
      solutions[i] = std::move(traj);
    } catch (const BlowUpDetected& blow) {
      e.status = SolveStatus::blow_up;
      e.t_star = blow.t_star();
      e.serrin = serrin_norm(*blow.partial());
      e.sup_V = blow.partial()->sup_V();
    }
  });

  const bool all_solved = std::all_of(report.entries.begin(), report.entries.end(),
                                      [](const SweepEntry& e) { return e.status == SolveStatus::converged; });
  const double max_serrin =
      std::max_element(report.entries.begin(), report.entries.end(), [](const SweepEntry& a, const SweepEntry& b) {
        return a.serrin < b.serrin;
      })->serrin;
  report.verdict = all_solved && max_serrin <= options.serrin_evidence_threshold ? Verdict::all_solved_bounded
                                                                                 : Verdict::unbounded_family_evidence;
  if (all_solved) {
    report.family_bound = max_serrin;
    double lip = 0.0;
    for (std::size_t i = 1; i < solutions.size(); ++i) {
      lip = std::max(lip, sup_V_distance(*solutions[i], *solutions[i - 1]) / (lambdas[i] - lambdas[i - 1]));
    }
    report.lambda_lipschitz = lip;
  }
  return report;
}

NonConvergence::NonConvergence(FixedPointLog log)
    : std::runtime_error("fixed-point iteration did not converge"), log_(std::move(log)) {}

namespace {

Trajectory blend(const Trajectory& previous, const Trajectory& image, double lambda, double relaxation) {
  std::vector<SpectralField> states;
  states.reserve(image.states.size());
  for (std::size_t i = 0; i < image.states.size(); ++i) {
    if (relaxation == 1.0) {
      states.push_back(lambda * image.states[i]);
    } else {
      states.push_back((1.0 - relaxation) * previous.states[i] + (relaxation * lambda) * image.states[i]);
    }
  }
  return make_trajectory(image.config, image.times, std::move(states));
}

}  // namespace

FixedPointLog fixed_point_iterate(double lambda, const SpectralField& y0, const ForcingSpec& f,
                                  const Trajectory* z_init, int max_iter, double tol, const SolverConfig& config,
                                  double relaxation) {
  if (lambda < 0.0 || lambda > 1.0) throw ConfigError("lambda must lie in [0, 1]");
  if (max_iter < 1) throw ConfigError("max_iter must be positive");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) throw ConfigError("relaxation must lie in (0, 1]");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");

  FixedPointLog log;
  log.lambda = lambda;
  log.tol = tol;
  log.relaxation = relaxation;

  Trajectory z = z_init ? *z_init : zero_trajectory(y0.mode_set(), config);
  if (z_init) require_matching_grids(z, zero_trajectory(y0.mode_set(), config));

  for (int n = 0; n < max_iter; ++n) {
    Trajectory image;
    try {
      image = solve_controlled(z, y0, f, config);
    } catch (const BlowUpDetected&) {
      log.distances.push_back(std::numeric_limits<double>::infinity());
      log.final = std::make_shared<const Trajectory>(std::move(z));
      throw NonConvergence(std::move(log));
    }
    Trajectory next = blend(z, image, lambda, relaxation);
    const double d = sup_V_distance(next, z);
    log.distances.push_back(d);
    z = std::move(next);
    if (d <= tol) {
      log.converged = true;
      log.final = std::make_shared<const Trajectory>(std::move(z));
      return log;
    }
  }
  log.final = std::make_shared<const Trajectory>(std::move(z));
  throw NonConvergence(std::move(log));
}

CompactnessReport compactness_probe(const std::vector<Trajectory>& z_batch, const SpectralField& y0, double c2,
                                    const SolverConfig& config) {
  CompactnessReport report;
  report.verification.context = "uniform Gronwall bound of the control-to-state map over a batch";
  const auto zero = ForcingSpec::zero(y0.mode_set());
  const double y0v2 = std::pow(norm_V(y0), 2);
  for (std::size_t i = 0; i < z_batch.size(); ++i) {
    const auto& z = z_batch[i];
    CompactnessEntry e;
    e.serrin_z = serrin_norm(z);
    e.bound = y0v2 * std::exp(2.0 * c2 * std::pow(e.serrin_z, 8));
    const std::string tag = "z[" + std::to_string(i) + "]:";
    try {
      const auto y = solve_controlled(z, y0, zero, config);
      for (double v : y.norms.norm_V) e.sup_V2 = std::max(e.sup_V2, v * v);
      const auto gr = verify_gronwall(y, z, c2, config.nu);
      e.passed = gr.passed();
      for (auto check : gr.checks) {
        check.name = tag + check.name;
        report.verification.checks.push_back(std::move(check));
      }
    } catch (const BlowUpDetected& blow) {
      e.blew_up = true;
      e.sup_V2 = std::pow(blow.partial()->sup_V(), 2);
      auto& check = report.verification.add(tag + "gronwall_V", e.sup_V2, e.bound);
      e.passed = check.passed;
      report.verification.notes.push_back(tag + " controlled solve hit the V-norm cap at t = " +
                                          std::to_string(blow.t_star()));
    }
    report.sup_over_batch = std::max(report.sup_over_batch, e.sup_V2);
    report.max_bound = std::max(report.max_bound, e.bound);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace nsgal
