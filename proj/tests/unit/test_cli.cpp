#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracstep/errors.hpp"
#include "fracstep_app/commands.hpp"
#include "fracstep_app/config.hpp"
#include "fracstep_app/io.hpp"

using namespace fracstep::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal_config() {
  return json::parse(R"({
    "problem": {
      "schedule": {"breakpoints": [0.0, 0.5, 1.0], "orders": [0.4, 0.7]},
      "initial": {"eigenmodes": [[1, 1.0], [2, -0.25]]},
      "source": {"terms": [{"shape": {"sine": 1}, "profile": {"type": "constant", "value": 0.5}}]},
      "modes": 3
    },
    "run": {"times": {"count": 5}, "x_points": 5}
  })");
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fracstep_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path.string();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(Config, ParsesShippedConfigs) {
  for (const char* name : {"constant_order.json", "two_segment.json", "forced_three_segment.json", "ml_points.json"}) {
    EXPECT_NO_THROW((void)load_config(std::string(FRACSTEP_CONFIG_DIR) + "/" + name)) << name;
  }
}

TEST(Config, MinimalDocumentDefaults) {
  const auto cfg = parse_config(minimal_config());
  EXPECT_EQ(cfg.problem.schedule.segment_count(), 2u);
  EXPECT_EQ(cfg.problem.modes, 3u);
  EXPECT_EQ(cfg.times.size(), 5u);
  EXPECT_DOUBLE_EQ(cfg.times.back(), 1.0);
  EXPECT_EQ(cfg.oracle.tau, 1.0 / 1024.0);
}

TEST(Config, UnknownKeyReportsPath) {
  auto doc = minimal_config();
  doc["problem"]["schedule"]["extra"] = 1;
  try {
    (void)parse_config(doc);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(e.path().find("schedule"), std::string::npos) << e.path();
  }
}

TEST(Config, RejectsInvalidValues) {
  auto grading = minimal_config();
  grading["problem"]["quadrature"] = {{"grading", 0.5}};
  EXPECT_THROW((void)parse_config(grading), ConfigError);
  auto orders = minimal_config();
  orders["problem"]["schedule"]["orders"] = {0.4};
  EXPECT_ANY_THROW((void)parse_config(orders));
  auto kind = minimal_config();
  kind["problem"]["modes"] = "three";
  EXPECT_THROW((void)parse_config(kind), ConfigError);
  auto oracle = minimal_config();
  oracle["run"]["oracle"] = {{"spatial_points", 8}};
  EXPECT_THROW((void)parse_config(oracle), ConfigError);
}

TEST(Config, MalformedFileIsConfigError) {
  const auto dir = scratch_dir("malformed");
  EXPECT_THROW((void)load_config(write_file(dir / "bad.json", "{\"problem\": [")), ConfigError);
  EXPECT_THROW((void)load_config((dir / "missing.json").string()), ConfigError);
}

TEST(Csv, FormatsWithSeventeenDigitsAndLf) {
  CsvTable t({"a", "b"});
  t.row({0.1, -2.0});
  EXPECT_EQ(t.str(), "a,b\n0.10000000000000001,-2\n");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.33333333333333331");
  EXPECT_THROW(t.row({1.0}), std::exception);
}

TEST(Commands, SolveWritesConsistentTables) {
  const auto cfg = parse_config(minimal_config());
  const auto out = run_solve(cfg, {});
  ASSERT_TRUE(out.count("modes.csv") && out.count("solution.csv") && out.count("meta.json"));
  EXPECT_EQ(count_lines(out.at("modes.csv")), 1 + 5 * 3);
  EXPECT_EQ(count_lines(out.at("solution.csv")), 1 + 5 * 5);
  EXPECT_EQ(out.at("solution.csv").find('\r'), std::string::npos);
  std::istringstream rows(out.at("solution.csv"));
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "x,t,u");
  while (std::getline(rows, line)) {
    if (line.rfind("0,", 0) == 0 || line.rfind("1,", 0) == 0) {
      EXPECT_EQ(line.substr(line.rfind(',')), ",0") << line;
    }
  }
  const auto meta = json::parse(out.at("meta.json"));
  EXPECT_EQ(meta["junction_gaps"].size(), 1u);
  EXPECT_EQ(meta["junction_gaps"][0].get<double>(), 0.0);
}

TEST(Commands, ConfigEchoReproducesOutputs) {
  const auto first = run_solve(parse_config(minimal_config()), {});
  const auto echoed = json::parse(first.at("meta.json"))["config"];
  const auto second = run_solve(parse_config(echoed), {});
  EXPECT_EQ(first.at("modes.csv"), second.at("modes.csv"));
  EXPECT_EQ(first.at("solution.csv"), second.at("solution.csv"));
}

TEST(Commands, CompareOnZeroDataIsExactlyZero) {
  auto doc = minimal_config();
  doc["problem"].erase("source");
  doc["problem"]["initial"] = {{"eigenmodes", json::array()}};
  doc["run"]["compare"] = {{"tau_exponents", {3, 4}}};
  const auto out = run_compare(parse_config(doc), {});
  std::istringstream rows(out.at("compare.csv"));
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "tau_exponent,tau,max_discrepancy,l2_discrepancy");
  int count = 0;
  while (std::getline(rows, line)) {
    ++count;
    EXPECT_EQ(line.substr(line.find(',', line.find(',') + 1)), ",0,0") << line;
  }
  EXPECT_EQ(count, 2);
}

TEST(Commands, MisalignedOracleStepIsConfigError) {
  auto doc = minimal_config();
  doc["run"]["oracle"] = {{"tau", 0.3}};
  EXPECT_THROW((void)run_oracle(parse_config(doc), {}), fracstep::DomainError);
  const auto dir = scratch_dir("misaligned");
  const auto path = write_file(dir / "cfg.json", doc.dump());
  EXPECT_EQ(dispatch("oracle", path, (dir / "out").string(), {}), kConfig);
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Commands, DispatchExitCodes) {
  const auto dir = scratch_dir("dispatch");
  const auto good = write_file(dir / "good.json", minimal_config().dump());
  EXPECT_EQ(dispatch("solve", good, (dir / "ok").string(), {}), kOk);
  EXPECT_TRUE(fs::exists(dir / "ok" / "solution.csv"));
  EXPECT_EQ(dispatch("bogus", good, (dir / "usage").string(), {}), kUsage);
  const auto bad = write_file(dir / "bad.json", "{");
  EXPECT_EQ(dispatch("solve", bad, (dir / "bad").string(), {}), kConfig);
  EXPECT_FALSE(fs::exists(dir / "bad"));
  auto hyp = minimal_config();
  hyp["problem"]["operator"] = {{"diffusivity", 1.0}, {"reaction", -20.0}};
  const auto coercive = write_file(dir / "coercive.json", hyp.dump());
  EXPECT_EQ(dispatch("solve", coercive, (dir / "coercive").string(), {}), kConfig);
  EXPECT_FALSE(fs::exists(dir / "coercive"));
}

TEST(Commands, MlEvalListsRegimes) {
  const auto cfg = load_config(std::string(FRACSTEP_CONFIG_DIR) + "/ml_points.json");
  const auto out = run_ml_eval(cfg, {});
  EXPECT_EQ(count_lines(out.at("ml.csv")), 1 + cfg.ml_points.size());
  EXPECT_EQ(out.at("ml.csv").rfind("alpha,beta,z,value,regime\n", 0), 0u);
}
