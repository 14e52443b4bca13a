#pragma once

#include <filesystem>
#include <iosfwd>

namespace nsgal {

/// Writes SVG line plots for the CSV traces in `run_dir`: one file per
/// norms.csv column against t, and serrin against lambda for sweep.csv with
/// blow-up values marked. Each SVG embeds its source CSV verbatim and carries
/// the plotted values as data attributes. Returns 1 if neither CSV exists or
/// one is malformed; an empty sweep only warns.
int emit_plots(const std::filesystem::path& run_dir, std::ostream& log);

}  // namespace nsgal
