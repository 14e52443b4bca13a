#include "nsgal/experiment.hpp"

#include "nsgal/continuation.hpp"
#include "nsgal/errors.hpp"
#include "nsgal/estimates.hpp"
#include "nsgal/io.hpp"
#include "nsgal/operators.hpp"
#include "nsgal/solvers.hpp"

#include <Eigen/Geometry>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace nsgal {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Command c) {
  switch (c) {
    case Command::nse: return "nse";
    case Command::controlled: return "controlled";
    case Command::perturb: return "perturb";
    case Command::sweep: return "sweep";
    case Command::fixed_point: return "fixed-point";
    case Command::constants: return "constants";
    case Command::check: return "check";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class KeyValues {
 public:
  explicit KeyValues(std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
      if (!values_.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
    }
  }

  std::optional<std::string> take(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) throw ConfigError("missing required key '" + key + "'");
    return *v;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : values_) {
      if (!used_.contains(key)) throw ConfigError("unknown key '" + key + "'");
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("key '" + key + "': cannot parse '" + text + "'");
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

template <typename T>
void read(KeyValues& kv, const std::string& key, T& target) {
  if (auto v = kv.take(key)) target = parse_value<T>(key, *v);
}

void read_field_spec(KeyValues& kv, const std::string& preset_key, const std::string& prefix, FieldSpec& spec) {
  if (auto v = kv.take(preset_key)) spec.preset = *v;
  read(kv, prefix + "amplitude", spec.amplitude);
  read(kv, prefix + "seed", spec.seed);
  read(kv, prefix + "decay", spec.decay);
  if (auto v = kv.take(prefix + "mode")) {
    const auto parts = split_list(*v);
    if (parts.size() != 3) throw ConfigError("key '" + prefix + "mode' needs three integers");
    for (int i = 0; i < 3; ++i) spec.mode[i] = parse_value<int>(prefix + "mode", parts[static_cast<std::size_t>(i)]);
  }
}

Command parse_command(const std::string& s) {
  for (auto c : {Command::nse, Command::controlled, Command::perturb, Command::sweep, Command::fixed_point,
                 Command::constants, Command::check}) {
    if (s == to_string(c)) return c;
  }
  throw ConfigError("unknown command '" + s + "'");
}

void validate_field_spec(const FieldSpec& s, const std::string& what, bool allow_steady) {
  static const std::set<std::string> presets{"zero", "taylor-green", "single-mode", "random"};
  if (!presets.contains(s.preset) && !(allow_steady && s.preset == "steady")) {
    throw ConfigError(what + ": unknown preset '" + s.preset + "'");
  }
  if (!std::isfinite(s.amplitude) || s.amplitude < 0.0) throw ConfigError(what + ": amplitude must be finite and >= 0");
  if (!(s.decay >= 0.0)) throw ConfigError(what + ": decay must be >= 0");
  if (s.preset == "single-mode" && s.mode.isZero()) throw ConfigError(what + ": mode must be nonzero");
}

SpectralField build_field(const FieldSpec& s, const std::shared_ptr<const ModeSet>& modes, const std::string& what) {
  if (s.preset == "zero" || s.amplitude == 0.0) return SpectralField(modes);
  if (s.preset == "taylor-green") return taylor_green(modes, s.amplitude);
  if (s.preset == "single-mode") {
    if (modes->index_of(s.mode) < 0) throw ConfigError(what + ": mode is outside the cutoff");
    const Eigen::Vector3d k = s.mode.cast<double>();
    Eigen::Vector3d e = k.cross(Eigen::Vector3d::UnitZ());
    if (e.norm() == 0.0) e = k.cross(Eigen::Vector3d::UnitX());
    e.normalize();
    return single_mode(modes, s.mode, (s.amplitude * e).cast<std::complex<double>>());
  }
  const auto r = random_field(modes, s.seed, s.decay);
  return (s.amplitude / norm_V(r)) * r;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json field_spec_json(const FieldSpec& s) {
  return {{"preset", s.preset},
          {"amplitude", s.amplitude},
          {"seed", s.seed},
          {"decay", s.decay},
          {"mode", {s.mode[0], s.mode[1], s.mode[2]}}};
}

json experiment_json(const ExperimentConfig& c) {
  json j = {{"command", to_string(c.command)},
            {"data", field_spec_json(c.data)},
            {"forcing", field_spec_json(c.forcing)}};
  switch (c.command) {
    case Command::controlled:
      j["control"] = field_spec_json(c.control);
      break;
    case Command::perturb:
      j["perturbation"] = field_spec_json(c.perturbation);
      j["perturbation_forcing"] = field_spec_json(c.perturbation_forcing);
      break;
    case Command::sweep:
      j["lambdas"] = c.lambdas;
      j["lambda_points"] = c.lambda_points;
      j["serrin_threshold"] = c.serrin_threshold;
      break;
    case Command::fixed_point:
      j["lambda"] = c.lambda;
      j["max_iter"] = c.max_iter;
      j["tol"] = c.tol;
      j["relaxation"] = c.relaxation;
      j["match_tol"] = c.match_tol;
      break;
    default:
      break;
  }
  if (c.command == Command::controlled || c.command == Command::perturb || c.command == Command::constants) {
    j["samples"] = c.samples;
    j["estimate_seed"] = c.estimate_seed;
    j["estimate_decay"] = c.estimate_decay;
    j["sampler"] = c.sampler == Sampler::dense ? "dense" : "adversarial";
    j["safety_factor"] = c.safety_factor;
  }
  return j;
}

/// Exclusive ownership of an output directory for the lifetime of a run.
class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) : file_(dir / ".nsgal.lock") {
    fs::create_directories(dir);
    std::FILE* f = std::fopen(file_.c_str(), "wx");
    if (!f) throw ConfigError("output directory " + dir.string() + " is locked by another run");
    std::fclose(f);
  }
  ~DirectoryLock() {
    std::error_code ec;
    fs::remove(file_, ec);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  fs::path file_;
};

struct Prepared {
  std::shared_ptr<const ModeSet> modes;
  SpectralField y0;
  ForcingSpec f;
  std::optional<SpectralField> control;
  std::optional<SpectralField> perturbation;
  std::optional<ForcingSpec> perturbation_forcing;
  std::vector<double> lambdas;
};

Prepared prepare(const ExperimentConfig& c) {
  validate(c);
  auto modes = ModeSet::with_cutoff(c.solver.cutoff);
  auto y0 = build_field(c.data, modes, "data");
  ForcingSpec f = ForcingSpec::zero(modes);
  if (c.forcing.preset == "steady") {
    f = ForcingSpec::constant(c.solver.nu * apply_A(y0));
  } else if (c.forcing.preset != "zero") {
    f = ForcingSpec::constant(build_field(c.forcing, modes, "forcing"));
  }
  Prepared p{modes, std::move(y0), std::move(f), {}, {}, {}, {}};
  if (c.command == Command::controlled) p.control = build_field(c.control, modes, "control");
  if (c.command == Command::perturb) {
    p.perturbation = build_field(c.perturbation, modes, "perturbation");
    p.perturbation_forcing = ForcingSpec::constant(build_field(c.perturbation_forcing, modes, "perturbation_forcing"));
  }
  if (c.command == Command::sweep) p.lambdas = c.lambdas.empty() ? uniform_lambda_grid(c.lambda_points) : c.lambdas;
  return p;
}

class Runner {
 public:
  Runner(const ExperimentConfig& c, Prepared p, fs::path dir, const RunOptions& opt, std::ostream& log)
      : c_(c), p_(std::move(p)), dir_(std::move(dir)), opt_(opt), log_(log) {
    meta_ = {{"command", to_string(c.command)}, {"timestamp", timestamp()}, {"experiment", experiment_json(c)}};
  }

  int operator()() {
    write_field_csv(dir_ / "initial.csv", p_.y0);
    switch (c_.command) {
      case Command::nse: return nse();
      case Command::controlled: return controlled();
      case Command::perturb: return perturb();
      case Command::sweep: return sweep();
      case Command::fixed_point: return fixed_point();
      case Command::constants: return constants();
      case Command::check: return check();
    }
    return exit_code::config_error;
  }

 private:
  int verdict(const std::vector<const VerificationReport*>& reports) {
    bool ok = true;
    for (const auto* r : reports) ok = ok && r->passed();
    if (!ok) log_ << "warning: at least one verification check failed\n";
    return ok || !opt_.strict ? exit_code::success : exit_code::check_failed;
  }

  void finish(const Trajectory& traj, int code, const fs::path& sub = {}) {
    json extra = meta_;
    extra["exit_code"] = code;
    write_trajectory(sub.empty() ? dir_ : dir_ / sub, traj, c_.snapshot_stride, extra);
  }

  void finish_meta(int code) {
    json meta = meta_;
    meta["config"] = to_json(c_.solver);
    meta["exit_code"] = code;
    write_json(dir_ / "meta.json", meta);
  }

  int blow_up(const BlowUpDetected& b, const fs::path& sub = {}) {
    log_ << "blow-up: V-norm cap exceeded at t* = " << b.t_star() << '\n';
    meta_["t_star"] = b.t_star();
    finish(*b.partial(), exit_code::blow_up, sub);
    return exit_code::blow_up;
  }

  ConstantEstimate estimate() {
    EstimationOptions o;
    o.decay = c_.estimate_decay;
    o.nu = c_.solver.nu;
    o.threads = opt_.threads;
    o.sampler = c_.sampler;
    auto e = estimate_constants(p_.modes, c_.samples, c_.estimate_seed, o);
    write_json(dir_ / "constants.json", to_json(e));
    return e;
  }

  int nse() {
    try {
      const auto y = solve_nse(p_.y0, p_.f, c_.solver);
      const auto energy = check_energy_inequality(y, p_.f, c_.energy_tol);
      const int code = verdict({&energy});
      write_json(dir_ / "verification.json", {{"energy_inequality", to_json(energy)}});
      meta_["serrin"] = serrin_norm(y);
      finish(y, code);
      return code;
    } catch (const BlowUpDetected& b) {
      return blow_up(b);
    }
  }

  int controlled() {
    const auto grid = zero_trajectory(p_.modes, c_.solver);
    const auto z = make_trajectory(c_.solver, grid.times, std::vector<SpectralField>(grid.size(), *p_.control));
    const auto est = estimate();
    const double c2 = c2_from_c1(c_.safety_factor * est.c1, c_.solver.nu);
    try {
      const auto y = solve_controlled(z, p_.y0, p_.f, c_.solver);
      auto gronwall = verify_gronwall(y, z, c2, c_.solver.nu, &p_.f);
      gronwall.safety_factor = c_.safety_factor;
      const int code = verdict({&gronwall});
      write_json(dir_ / "verification.json", {{"gronwall", to_json(gronwall)}});
      meta_["c2"] = c2;
      finish(y, code);
      return code;
    } catch (const BlowUpDetected& b) {
      return blow_up(b);
    }
  }

  int perturb() {
    Trajectory y;
    try {
      y = solve_nse(p_.y0, p_.f, c_.solver);
    } catch (const BlowUpDetected& b) {
      return blow_up(b);
    }
    const auto est = estimate();
    const double c = c_.safety_factor * est.c;
    const auto constants = compute_constants(c, c_.solver.nu, c_.solver.T, y);
    write_json(dir_ / "stability.json", to_json(constants));
    Trajectory eta;
    try {
      eta = solve_perturbation(y, *p_.perturbation, *p_.perturbation_forcing, c_.solver);
    } catch (const BlowUpDetected& b) {
      finish(y, exit_code::blow_up);
      return blow_up(b, "perturbation");
    }
    const ForcingSpec g = p_.f + *p_.perturbation_forcing;
    std::vector<SpectralField> zs;
    zs.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) zs.push_back(y.states[i] + eta.states[i]);
    const auto z = make_trajectory(c_.solver, y.times, std::move(zs), &g);
    auto lipschitz = verify_lipschitz(y, z, constants, p_.y0 + *p_.perturbation, g, p_.y0, p_.f);
    auto proof = verify_proof_estimates(eta, y, *p_.perturbation_forcing, c, c_.solver.nu, constants);
    lipschitz.safety_factor = proof.safety_factor = c_.safety_factor;
    const int code = verdict({&lipschitz, &proof});
    write_json(dir_ / "verification.json",
               {{"lipschitz", to_json(lipschitz)}, {"proof_estimates", to_json(proof)}});
    finish(y, code);
    finish(eta, code, "perturbation");
    return code;
  }

  int sweep() {
    SweepOptions o;
    o.serrin_evidence_threshold = c_.serrin_threshold;
    o.threads = opt_.threads;
    const auto report = lambda_sweep(p_.y0, p_.f, p_.lambdas, c_.solver, o);
    write_sweep_csv(dir_ / "sweep.csv", report);
    write_json(dir_ / "sweep.json", to_json(report));
    meta_["verdict"] = to_string(report.verdict);
    finish_meta(exit_code::success);
    log_ << "verdict: " << to_string(report.verdict) << '\n';
    return exit_code::success;
  }

  int fixed_point() {
    FixedPointLog log;
    try {
      log = fixed_point_iterate(c_.lambda, p_.y0, p_.f, nullptr, c_.max_iter, c_.tol, c_.solver, c_.relaxation);
    } catch (const NonConvergence& nc) {
      log_ << "fixed-point iteration did not converge after " << nc.log().distances.size() << " iterations\n";
      write_json(dir_ / "fixed_point.json", to_json(nc.log()));
      finish(*nc.log().final, exit_code::non_convergence);
      return exit_code::non_convergence;
    }
    write_json(dir_ / "fixed_point.json", to_json(log));
    try {
      const auto direct = solve_nse(c_.lambda * p_.y0, p_.f.scaled(c_.lambda), c_.solver);
      VerificationReport report;
      report.context = "fixed point of z = lambda F(z) against the direct solve with data (lambda y0, lambda f)";
      report.add("fixed_point_vs_direct", sup_V_distance(*log.final, direct), c_.match_tol, 0.0);
      const int code = verdict({&report});
      write_json(dir_ / "verification.json", {{"fixed_point", to_json(report)}});
      finish(*log.final, code);
      return code;
    } catch (const BlowUpDetected& b) {
      return blow_up(b);
    }
  }

  int constants() {
    estimate();
    finish_meta(exit_code::success);
    return exit_code::success;
  }

  int check() {
    try {
      const auto y = solve_nse(p_.y0, p_.f, c_.solver);
      const auto energy = check_energy_inequality(y, p_.f, c_.energy_tol);
      const auto unique = cross_integrator_uniqueness(p_.y0, p_.f, c_.solver, c_.uniqueness_tol);
      const int code = verdict({&energy, &unique});
      write_json(dir_ / "verification.json",
                 {{"energy_inequality", to_json(energy)}, {"uniqueness", to_json(unique)}});
      meta_["serrin"] = serrin_norm(y);
      finish(y, code);
      return code;
    } catch (const BlowUpDetected& b) {
      return blow_up(b);
    }
  }

  const ExperimentConfig& c_;
  Prepared p_;
  fs::path dir_;
  RunOptions opt_;
  std::ostream& log_;
  json meta_;
};

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  KeyValues kv(in);
  ExperimentConfig c;
  c.command = parse_command(kv.require("command"));
  c.solver.nu = parse_value<double>("nu", kv.require("nu"));
  c.solver.T = parse_value<double>("T", kv.require("T"));
  c.solver.dt = parse_value<double>("dt", kv.require("dt"));
  c.solver.cutoff = parse_value<int>("cutoff", kv.require("cutoff"));
  read(kv, "blowup_threshold", c.solver.blowup_threshold);
  if (auto v = kv.take("integrator")) {
    if (*v == "rk4") c.solver.integrator = Integrator::rk4;
    else if (*v == "etd2") c.solver.integrator = Integrator::etd2;
    else throw ConfigError("unknown integrator '" + *v + "'");
  }
  if (auto v = kv.take("interpolation"); v && *v != "linear") throw ConfigError("only linear interpolation is supported");

  read_field_spec(kv, "data", "", c.data);
  read_field_spec(kv, "forcing", "forcing_", c.forcing);
  read_field_spec(kv, "control", "control_", c.control);
  read_field_spec(kv, "perturbation", "perturbation_", c.perturbation);
  read_field_spec(kv, "perturbation_forcing", "perturbation_forcing_", c.perturbation_forcing);

  if (auto v = kv.take("lambdas")) {
    for (const auto& s : split_list(*v)) c.lambdas.push_back(parse_value<double>("lambdas", s));
  }
  read(kv, "lambda_points", c.lambda_points);
  read(kv, "serrin_threshold", c.serrin_threshold);
  read(kv, "lambda", c.lambda);
  read(kv, "max_iter", c.max_iter);
  read(kv, "tol", c.tol);
  read(kv, "relaxation", c.relaxation);
  read(kv, "match_tol", c.match_tol);
  read(kv, "samples", c.samples);
  read(kv, "estimate_seed", c.estimate_seed);
  read(kv, "estimate_decay", c.estimate_decay);
  if (auto v = kv.take("sampler")) {
    if (*v == "dense") c.sampler = Sampler::dense;
    else if (*v == "adversarial") c.sampler = Sampler::adversarial;
    else throw ConfigError("unknown sampler '" + *v + "'");
  }
  read(kv, "safety_factor", c.safety_factor);
  read(kv, "energy_tol", c.energy_tol);
  read(kv, "uniqueness_tol", c.uniqueness_tol);
  read(kv, "snapshot_stride", c.snapshot_stride);
  if (auto v = kv.take("out_dir")) c.out_dir = *v;
  kv.reject_unknown();
  validate(c);
  return c;
}

ExperimentConfig parse_config_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  return parse_config(in);
}

void validate(const ExperimentConfig& c) {
  c.solver.validate();
  if (c.solver.cutoff > 8) throw ConfigError("cutoff above 8 is outside the supported desk scale");
  validate_field_spec(c.data, "data", false);
  validate_field_spec(c.forcing, "forcing", true);
  validate_field_spec(c.control, "control", false);
  validate_field_spec(c.perturbation, "perturbation", false);
  validate_field_spec(c.perturbation_forcing, "perturbation_forcing", false);
  if (c.lambda_points < 2) throw ConfigError("lambda_points must be at least 2");
  if (!(c.serrin_threshold > 0.0)) throw ConfigError("serrin_threshold must be positive");
  if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  if (c.max_iter < 1) throw ConfigError("max_iter must be positive");
  if (!(c.tol > 0.0) || !(c.match_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(c.relaxation > 0.0 && c.relaxation <= 1.0)) throw ConfigError("relaxation must lie in (0, 1]");
  if (c.samples < 1) throw ConfigError("samples must be positive");
  if (!(c.estimate_decay >= 0.0)) throw ConfigError("estimate_decay must be >= 0");
  if (!(c.safety_factor >= 1.0)) throw ConfigError("safety_factor must be >= 1");
  if (!(c.energy_tol > 0.0) || !(c.uniqueness_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (c.snapshot_stride < 1) throw ConfigError("snapshot_stride must be positive");
  if (c.command == Command::sweep && !c.lambdas.empty()) {
    if (c.lambdas.front() != 0.0 || c.lambdas.back() != 1.0) throw ConfigError("lambda grid must contain 0 and 1");
    for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
      if (c.lambdas[i] < 0.0 || c.lambdas[i] > 1.0) throw ConfigError("lambda values must lie in [0, 1]");
      if (i > 0 && !(c.lambdas[i] > c.lambdas[i - 1])) throw ConfigError("lambda grid must be increasing");
    }
  }
}

int run_experiment(const ExperimentConfig& config, const fs::path& out_dir, const RunOptions& options,
                   std::ostream& log) {
  std::optional<Prepared> prepared;
  try {
    if (options.threads < 1) throw ConfigError("threads must be positive");
    prepared.emplace(prepare(config));
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::config_error;
  }
  try {
    DirectoryLock lock(out_dir);
    return Runner(config, std::move(*prepared), out_dir, options, log)();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::config_error;
  }
}

int run(const fs::path& config_file, const std::optional<fs::path>& out_dir, const RunOptions& options,
        std::ostream& log) {
  ExperimentConfig config;
  try {
    config = parse_config_file(config_file);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::config_error;
  }
  const auto dir = out_dir ? out_dir : config.out_dir;
  if (!dir) {
    log << "config error: no output directory (use --out-dir or the out_dir key)\n";
    return exit_code::config_error;
  }
  return run_experiment(config, *dir, options, log);
}

}  // namespace nsgal
