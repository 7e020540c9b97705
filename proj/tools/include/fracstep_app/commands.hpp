#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "fracstep_app/config.hpp"
#include "fracstep_app/io.hpp"

namespace fracstep::app {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kNumeric = 3 };

struct RunOptions {
  unsigned threads = 1;
  bool deterministic = false;

  [[nodiscard]] unsigned effective_threads() const noexcept { return deterministic || threads == 0 ? 1 : threads; }
};

/// Command-line values that replace run.oracle settings.
struct OracleOverrides {
  std::optional<double> tau;
  std::optional<bool> full;
  std::optional<std::size_t> spatial_points;
};

/// Each command returns its artifacts; nothing touches the disk until the caller commits them.
[[nodiscard]] Artifacts run_solve(const RunConfig& cfg, const RunOptions& options);
[[nodiscard]] Artifacts run_oracle(const RunConfig& cfg, const RunOptions& options);
[[nodiscard]] Artifacts run_compare(const RunConfig& cfg, const RunOptions& options);
[[nodiscard]] Artifacts run_verify(const RunConfig& cfg, const RunOptions& options);
[[nodiscard]] Artifacts run_ml_eval(const RunConfig& cfg, const RunOptions& options);

/// Loads the configuration, runs `command` and commits its artifacts to `out_dir`.
///
/// Failures print a JSON error object on stdout and map to kConfig (bad input) or
/// kNumeric (numerical failure); no files are written in either case.
[[nodiscard]] int dispatch(const std::string& command, const std::string& config_path, const std::string& out_dir,
                           const RunOptions& options, const OracleOverrides& overrides = {});

/// JSON error document printed on failure.
[[nodiscard]] nlohmann::json error_document(const std::string& kind, const std::string& message,
                                            const std::string& path = "");

}  // namespace fracstep::app
