#pragma once

#include "nsgal/constant_estimate.hpp"
#include "nsgal/trajectory.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nsgal {

enum class Command { nse, controlled, perturb, sweep, fixed_point, constants, check };

const char* to_string(Command c);

/// Named field preset. `amplitude` scales taylor-green and single-mode
/// velocities; for `random` it is the V-norm of the generated field.
struct FieldSpec {
  std::string preset = "zero";  // zero | taylor-green | single-mode | random | steady (forcing only)
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  double decay = 2.0;
  Wavevector mode = Wavevector(1, 0, 0);
};

struct ExperimentConfig {
  Command command = Command::nse;
  SolverConfig solver;
  FieldSpec data;
  FieldSpec forcing;       // `steady` selects f = nu A y0
  FieldSpec control;       // controlled: time-constant control z
  FieldSpec perturbation;  // perturb: z0 - y0
  FieldSpec perturbation_forcing;  // perturb: g - f, constant in time

  std::vector<double> lambdas;  // sweep; empty selects lambda_points uniform points
  int lambda_points = 11;
  double serrin_threshold = 1e6;

  double lambda = 1.0;  // fixed-point
  int max_iter = 50;
  double tol = 1e-8;
  double relaxation = 1.0;
  double match_tol = 1e-6;  // fixed point vs direct solve, sup-V

  int samples = 2000;  // constant estimation
  std::uint64_t estimate_seed = 7;
  double estimate_decay = 2.0;
  Sampler sampler = Sampler::dense;
  double safety_factor = 2.0;

  double energy_tol = 1e-6;
  double uniqueness_tol = 1e-5;
  int snapshot_stride = 100;

  std::optional<std::filesystem::path> out_dir;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, malformed
/// values and missing required keys (command, nu, T, dt, cutoff) throw
/// ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::filesystem::path& file);

/// Range checks beyond parsing; throws ConfigError.
void validate(const ExperimentConfig& config);

struct RunOptions {
  bool strict = false;
  int threads = 1;
};

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int config_error = 1;
inline constexpr int blow_up = 2;
inline constexpr int non_convergence = 3;
inline constexpr int check_failed = 4;
}  // namespace exit_code

/// Runs one experiment into `out_dir` and returns the exit code. Nothing is
/// written when the configuration is rejected.
int run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir, const RunOptions& options,
                   std::ostream& log);

/// Parses `config_file` and runs it; `out_dir` overrides the config key.
int run(const std::filesystem::path& config_file, const std::optional<std::filesystem::path>& out_dir,
        const RunOptions& options, std::ostream& log);

}  // namespace nsgal
