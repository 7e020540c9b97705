#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <string>

#include "fracstep_app/commands.hpp"

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("fracstep");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("FRACSTEP_LOG")) spdlog::set_level(spdlog::level::from_str(level));

  CLI::App app{"Variable-order time-fractional subdiffusion solver"};
  app.require_subcommand(1);
  std::string config;
  std::string out = ".";
  fracstep::app::RunOptions options;

  const char* commands[][2] = {{"solve", "Spectral solve; writes solution.csv, modes.csv, meta.json"},
                               {"oracle", "L1 time-stepping oracle; writes oracle_*.csv, meta.json"},
                               {"compare", "Spectral vs L1 discrepancy table over tau; writes compare.csv"},
                               {"verify", "Regularity report; writes report.json, rate_fits.csv"},
                               {"ml-eval", "Batch Mittag-Leffler evaluation; writes ml.csv"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--threads", options.threads, "Worker threads for the mode loop")->check(CLI::PositiveNumber);
    sub->add_flag("--deterministic", options.deterministic, "Force a single worker");
  }
  auto* oracle = app.get_subcommand("oracle");
  double tau = 0.0;
  bool modes = false;
  bool full = false;
  std::size_t spatial_points = 0;
  oracle->add_option("--tau", tau, "Time step (overrides run.oracle.tau)")->check(CLI::PositiveNumber);
  auto* modes_flag = oracle->add_flag("--modes", modes, "Per-mode marches");
  oracle->add_flag("--full", full, "Full finite-difference solve")->excludes(modes_flag);
  oracle->add_option("--spatial-points", spatial_points, "Spatial intervals for --full")
      ->check(CLI::Range(16, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : fracstep::app::kUsage;
  }

  std::string command;
  for (auto* sub : app.get_subcommands()) command = sub->get_name();
  fracstep::app::OracleOverrides overrides;
  if (tau > 0.0) overrides.tau = tau;
  if (modes || full) overrides.full = full;
  if (spatial_points > 0) overrides.spatial_points = spatial_points;
  return fracstep::app::dispatch(command, config, out, options, overrides);
}
