#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracstep/problem.hpp"

namespace fracstep::app {

/// Invalid configuration; `path` locates the offending key (JSON pointer style).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct OracleSettings {
  double tau = 1.0 / 1024.0;
  bool full = false;  ///< full finite-difference solve instead of per-mode marches
  std::size_t spatial_points = 256;
};

struct CompareSettings {
  std::vector<int> tau_exponents = {8, 9, 10, 11, 12, 13, 14};  ///< tau = 2^-e
};

struct MLPoint {
  double alpha;
  double beta;
  double z;
};

/// Parsed run configuration.
struct RunConfig {
  nlohmann::json source;  ///< the configuration document as given
  ProblemSpec problem;
  std::vector<double> times;    ///< output sample times
  std::size_t x_points = 33;    ///< output sample points in [0, L], endpoints included
  OracleSettings oracle;
  CompareSettings compare;
  std::vector<MLPoint> ml_points;
};

/// Parses and validates a configuration document; unknown keys are rejected.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a configuration file.
[[nodiscard]] RunConfig load_config(const std::string& path);

}  // namespace fracstep::app
