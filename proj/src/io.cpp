#include "nsgal/io.hpp"

#include "nsgal/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace nsgal {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

namespace {

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) parts.push_back(cur);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

template <typename T>
T parse_number(const std::string& s, std::size_t row) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw DataIntegrityError("field CSV row " + std::to_string(row) + ": cannot parse '" + s + "'");
  }
  return value;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void write_field_csv(std::ostream& out, const SpectralField& u) {
  out << "kx,ky,kz,re1,im1,re2,im2,re3,im3\n";
  for (Eigen::Index i = 0; i < u.modes().size(); ++i) {
    const auto& k = u.modes().wavevector(i);
    out << k[0] << ',' << k[1] << ',' << k[2];
    for (int j = 0; j < 3; ++j) {
      out << ',' << format_double(u.coeffs()(j, i).real()) << ',' << format_double(u.coeffs()(j, i).imag());
    }
    out << '\n';
  }
}

void write_field_csv(const fs::path& file, const SpectralField& u) {
  auto out = open_out(file);
  write_field_csv(out, u);
}

SpectralField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "kx,ky,kz,re1,im1,re2,im2,re3,im3") {
    throw DataIntegrityError("field CSV: missing or unexpected header");
  }
  std::vector<Wavevector> ks;
  std::vector<Eigen::Vector3cd> amps;
  int cutoff = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    const std::size_t row = ks.size() + 1;
    if (parts.size() != 9) throw DataIntegrityError("field CSV row " + std::to_string(row) + ": expected 9 columns");
    Wavevector k(parse_number<int>(parts[0], row), parse_number<int>(parts[1], row), parse_number<int>(parts[2], row));
    Eigen::Vector3cd a;
    for (int j = 0; j < 3; ++j) {
      a(j) = {parse_number<double>(parts[3 + 2 * j], row), parse_number<double>(parts[4 + 2 * j], row)};
      if (!std::isfinite(a(j).real()) || !std::isfinite(a(j).imag())) {
        throw DataIntegrityError("field CSV row " + std::to_string(row) + ": non-finite amplitude");
      }
    }
    cutoff = std::max(cutoff, k.cwiseAbs().maxCoeff());
    ks.push_back(k);
    amps.push_back(a);
  }
  if (ks.empty()) throw DataIntegrityError("field CSV has no rows");
  const auto modes = ModeSet::with_cutoff(cutoff);
  if (static_cast<Eigen::Index>(ks.size()) != modes->size()) {
    throw DataIntegrityError("field CSV has " + std::to_string(ks.size()) + " rows, cutoff " +
                             std::to_string(cutoff) + " needs " + std::to_string(modes->size()));
  }
  SpectralField::Coefficients c(3, modes->size());
  for (Eigen::Index i = 0; i < modes->size(); ++i) {
    if (ks[static_cast<std::size_t>(i)] != modes->wavevector(i)) {
      throw DataIntegrityError("field CSV row " + std::to_string(i + 1) + ": modes out of lexicographic order");
    }
    c.col(i) = amps[static_cast<std::size_t>(i)];
  }
  return SpectralField(modes, std::move(c));
}

SpectralField read_field_csv(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataIntegrityError("cannot read " + file.string());
  return read_field_csv(in);
}

void write_norms_csv(const fs::path& file, const NormTrace& n) {
  auto out = open_out(file);
  out << "t,norm_H,norm_V,norm_DA,norm_L4,int_V2,int_f_y,int_L4_8\n";
  for (std::size_t i = 0; i < n.times.size(); ++i) {
    out << format_double(n.times[i]) << ',' << format_double(n.norm_H[i]) << ',' << format_double(n.norm_V[i]) << ','
        << format_double(n.norm_DA[i]) << ',' << format_double(n.norm_L4[i]) << ',' << format_double(n.int_V2[i])
        << ',' << format_double(n.int_f_y[i]) << ',' << format_double(n.int_L4_8[i]) << '\n';
  }
}

nlohmann::json to_json(const SolverConfig& c) {
  return {{"nu", c.nu},
          {"T", c.T},
          {"dt", c.dt},
          {"step", c.step()},
          {"steps", c.steps()},
          {"cutoff", c.cutoff},
          {"blowup_threshold", c.blowup_threshold},
          {"interpolation", "linear"},
          {"integrator", to_string(c.integrator)},
          {"inviscid_test_mode", c.inviscid_test_mode}};
}

nlohmann::json to_json(const ConstantEstimate& e) {
  return {{"c_b1", e.c_b1}, {"c_b2", e.c_b2}, {"c", e.c},           {"c1", e.c1},
          {"c2", e.c2},     {"nu", e.nu},     {"samples", e.samples}, {"seed", e.seed}};
}

nlohmann::json to_json(const StabilityConstants& s) {
  return {{"nu", s.nu},         {"T", s.T},       {"c", s.c},
          {"C", s.C},           {"delta", s.delta}, {"L", optional_number(s.L)},
          {"y_V_sup", s.y_V_sup}, {"vacuous_ball", s.vacuous_ball}};
}

nlohmann::json to_json(const VerificationReport& r) {
  auto checks = nlohmann::json::array();
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    nlohmann::json j = {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"margin", c.margin}, {"passed", c.passed}};
    if (!std::isnan(c.t)) j["t"] = c.t;
    checks.push_back(std::move(j));
    if (!c.passed) ++failed;
  }
  return {{"context", r.context},
          {"safety_factor", r.safety_factor},
          {"checks", std::move(checks)},
          {"notes", r.notes},
          {"precondition_met", r.precondition_met},
          {"summary", {{"passed", r.passed()}, {"checks", r.checks.size()}, {"failed", failed}}}};
}

nlohmann::json to_json(const SweepReport& r) {
  auto entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"lambda", e.lambda},
                       {"status", to_string(e.status)},
                       {"t_star", optional_number(e.t_star)},
                       {"serrin", e.serrin},
                       {"sup_V", e.sup_V}});
  }
  return {{"verdict", to_string(r.verdict)},
          {"evidence_threshold", r.evidence_threshold},
          {"family_bound", optional_number(r.family_bound)},
          {"lambda_lipschitz", optional_number(r.lambda_lipschitz)},
          {"entries", std::move(entries)}};
}

nlohmann::json to_json(const FixedPointLog& log) {
  auto d = nlohmann::json::array();
  for (double x : log.distances) d.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json("inf"));
  return {{"lambda", log.lambda},
          {"tol", log.tol},
          {"relaxation", log.relaxation},
          {"iterations", log.distances.size()},
          {"converged", log.converged},
          {"distances", std::move(d)}};
}

void write_json(const fs::path& file, const nlohmann::json& value) {
  auto out = open_out(file);
  out << value.dump(2) << '\n';
}

void write_trajectory(const fs::path& dir, const Trajectory& traj, int stride, const nlohmann::json& extra) {
  if (stride < 1) throw ConfigError("snapshot stride must be positive");
  fs::create_directories(dir / "snapshots");
  nlohmann::json meta = extra;
  meta["config"] = to_json(traj.config);
  meta["exit_status"] = to_string(traj.status);
  meta["t_star"] = optional_number(traj.t_star);
  meta["samples"] = traj.size();
  meta["warnings"] = traj.warnings;
  auto snaps = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i % static_cast<std::size_t>(stride) != 0 && i + 1 != traj.size()) continue;
    char name[32];
    std::snprintf(name, sizeof name, "field_%06zu.csv", i);
    write_field_csv(dir / "snapshots" / name, traj.states[i]);
    snaps.push_back({{"index", i}, {"t", traj.times[i]}, {"file", std::string("snapshots/") + name}});
  }
  meta["snapshots"] = std::move(snaps);
  write_json(dir / "meta.json", meta);
  write_norms_csv(dir / "norms.csv", traj.norms);
}

void write_sweep_csv(const fs::path& file, const SweepReport& r) {
  auto out = open_out(file);
  out << "lambda,status,t_star,serrin,sup_V\n";
  for (const auto& e : r.entries) {
    out << format_double(e.lambda) << ',' << to_string(e.status) << ','
        << (e.t_star ? format_double(*e.t_star) : std::string()) << ',' << format_double(e.serrin) << ','
        << format_double(e.sup_V) << '\n';
  }
}

}  // namespace nsgal
