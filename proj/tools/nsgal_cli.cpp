#include "nsgal/experiment.hpp"
#include "nsgal/plots.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Galerkin Navier-Stokes experiments on the periodic box"};
  app.require_subcommand(1);

  std::string config_file;
  std::string out_dir;
  nsgal::RunOptions options;
  auto* run = app.add_subcommand("run", "run one experiment from a key = value config file");
  run->add_option("--config", config_file, "config file")->required();
  run->add_option("--out-dir", out_dir, "output directory (overrides the out_dir key)");
  run->add_flag("--strict", options.strict, "exit 4 if any verification check fails");
  run->add_option("--threads", options.threads, "worker threads")->check(CLI::PositiveNumber);

  std::string run_dir;
  auto* plot = app.add_subcommand("plot", "write SVG plots for the CSV traces of a run");
  plot->add_option("--run-dir", run_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nsgal::exit_code::config_error;
  }

  if (*run) {
    std::optional<std::filesystem::path> dir;
    if (!out_dir.empty()) dir = out_dir;
    return nsgal::run(config_file, dir, options, std::cerr);
  }
  return nsgal::emit_plots(run_dir, std::cerr);
}
