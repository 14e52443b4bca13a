#pragma once

#include "nsgal/estimates.hpp"
#include "nsgal/forcing.hpp"
#include "nsgal/trajectory.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nsgal {

enum class SolveStatus { converged, blow_up };
enum class Verdict { all_solved_bounded, unbounded_family_evidence };

const char* to_string(SolveStatus s);
const char* to_string(Verdict v);

struct SweepEntry {
  double lambda = 0.0;
  SolveStatus status = SolveStatus::converged;
  std::optional<double> t_star;
  double serrin = 0.0;  // over the computed (possibly partial) trajectory
  double sup_V = 0.0;
};

/// Outcome of solving the scaled family (lambda y0, lambda f) over a grid of
/// lambda values. Blow-up flags and large Serrin norms are numerical evidence
/// only; they do not certify either alternative of the dichotomy.
struct SweepReport {
  std::vector<SweepEntry> entries;  // in lambda order
  Verdict verdict = Verdict::all_solved_bounded;
  double evidence_threshold = 0.0;
  /// max serrin over the family, exported when every lambda solved.
  std::optional<double> family_bound;
  /// max over adjacent grid points of sup_V(y_{l'} - y_l) / (l' - l), when
  /// every lambda solved.
  std::optional<double> lambda_lipschitz;
};

struct SweepOptions {
  double serrin_evidence_threshold = 1e6;
  int threads = 1;
};

/// `points` uniformly spaced values in [0, 1], endpoints included.
std::vector<double> uniform_lambda_grid(int points = 11);

SweepReport lambda_sweep(const SpectralField& y0, const ForcingSpec& f, const std::vector<double>& lambdas,
                         const SolverConfig& config, const SweepOptions& options = {});

/// Picard iterates z_{n+1} = (1 - w) z_n + w lambda F(z_n), F the solution map
/// of the controlled system with data (y0, f).
struct FixedPointLog {
  double lambda = 0.0;
  double tol = 0.0;
  double relaxation = 1.0;
  std::vector<double> distances;  // d_n = sup_t |z_{n+1} - z_n|_V
  bool converged = false;
  std::shared_ptr<const Trajectory> final;
};

class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(FixedPointLog log);
  const FixedPointLog& log() const { return log_; }

 private:
  FixedPointLog log_;
};

/// Throws NonConvergence after max_iter iterations without d_n <= tol, or when
/// an iterate leaves the bounded regime (blow-up of the inner solve; the last
/// distance is then +inf). `z_init` defaults to the zero trajectory.
FixedPointLog fixed_point_iterate(double lambda, const SpectralField& y0, const ForcingSpec& f,
                                  const Trajectory* z_init, int max_iter, double tol, const SolverConfig& config,
                                  double relaxation = 1.0);

struct CompactnessEntry {
  double serrin_z = 0.0;
  double sup_V2 = 0.0;  // sup_t |F(z)(t)|_V^2
  double bound = 0.0;   // |y0|_V^2 exp(2 c2 |z|_{L8(L4)}^8)
  bool blew_up = false;
  bool passed = false;
};

struct CompactnessReport {
  std::vector<CompactnessEntry> entries;
  double sup_over_batch = 0.0;
  double max_bound = 0.0;
  VerificationReport verification;
};

/// Uniform bound of F over a batch of controls: each F(z) is checked against
/// the Gronwall estimate with constant c2 (already safety-factored).
CompactnessReport compactness_probe(const std::vector<Trajectory>& z_batch, const SpectralField& y0, double c2,
                                    const SolverConfig& config);

}  // namespace nsgal
