#pragma once

#include "nsgal/constant_estimate.hpp"
#include "nsgal/continuation.hpp"
#include "nsgal/estimates.hpp"
#include "nsgal/trajectory.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace nsgal {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

/// Field CSV: header kx,ky,kz,re1,im1,re2,im2,re3,im3 and one row per mode in
/// lexicographic order.
void write_field_csv(std::ostream& out, const SpectralField& u);
void write_field_csv(const std::filesystem::path& file, const SpectralField& u);

/// The cutoff is inferred from the rows, which must enumerate the ModeSet in
/// order. Throws DataIntegrityError on malformed rows or violated invariants.
SpectralField read_field_csv(std::istream& in);
SpectralField read_field_csv(const std::filesystem::path& file);

void write_norms_csv(const std::filesystem::path& file, const NormTrace& norms);

nlohmann::json to_json(const SolverConfig& config);
nlohmann::json to_json(const ConstantEstimate& estimate);
nlohmann::json to_json(const StabilityConstants& constants);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const SweepReport& report);
nlohmann::json to_json(const FixedPointLog& log);

/// Writes meta.json (config, exit status, `extra`), norms.csv and every
/// `stride`-th state (plus the last) under snapshots/.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, int stride,
                      const nlohmann::json& extra = nlohmann::json::object());

void write_sweep_csv(const std::filesystem::path& file, const SweepReport& report);
void write_json(const std::filesystem::path& file, const nlohmann::json& value);

}  // namespace nsgal
