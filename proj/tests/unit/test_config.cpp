#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "logflow/app/config.hpp"

using namespace logflow;
using namespace logflow::app;

namespace {

const char* kMinimal = R"(name: tiny
pipeline: flow
grid: {n: 1, L: 2, m: 17}
initial:
  kind: quadratic
  A: 2
flow:
  t_end: 0.1
)";

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, ParsesMinimalFlowConfig) {
  const ExperimentConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.name, "tiny");
  EXPECT_EQ(c.pipeline, Pipeline::Flow);
  EXPECT_EQ(c.grid.points_per_axis, 17);
  EXPECT_EQ(c.initial.A(0, 0), 2.0);
  EXPECT_EQ(c.flow.tau, 1.0);
  EXPECT_EQ(c.flow.t_end, 0.1);
}

TEST(Config, TooFewGridPointsIsAValidationErrorOnItsLine) {
  std::string text = kMinimal;
  text.replace(text.find("m: 17"), 5, "m: 3");
  EXPECT_EQ(error_line(text), 3);
}

TEST(Config, UnknownKeyAndBadEnumCarryLines) {
  EXPECT_EQ(error_line(std::string(kMinimal) + "colour: blue\n"), 9);
  std::string text = kMinimal;
  text.replace(text.find("quadratic"), 9, "cubic");
  EXPECT_EQ(error_line(text), 5);
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("quadratic_plus_bump"), std::string::npos);
  }
}

TEST(Config, SyntaxErrorReportsLine) {
  EXPECT_GT(error_line("name: x\ngrid: {n: 1,\n  m: [\n"), 0);
}

TEST(Config, NonSymmetricOrIndefiniteMatrixRejected) {
  const std::string base = "pipeline: flow\ngrid: {n: 2, L: 1, m: 9}\ninitial:\n  kind: quadratic\n";
  EXPECT_EQ(error_line(base + "  A: [[1, 0.5], [0, 1]]\n"), 5);
  EXPECT_GT(error_line(base + "  A: [1, -1]\n"), 0);
}

TEST(Config, JsonIsAccepted) {
  const ExperimentConfig c = parse_config(
      R"({"name": "j", "pipeline": "flow", "grid": {"n": 2, "L": 1, "m": 9},
          "initial": {"kind": "quadratic", "A": [1, 2]}, "flow": {"t_end": 0.5}})");
  EXPECT_EQ(c.name, "j");
  EXPECT_EQ(c.initial.A(1, 1), 2.0);
}

TEST(Config, FileErrorsNameTheFile) {
  const auto path = std::filesystem::temp_directory_path() / "logflow_bad_config.yaml";
  std::ofstream(path) << "pipeline: nope\n";
  try {
    load_config(path);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("logflow_bad_config.yaml"), std::string::npos);
    EXPECT_EQ(e.line(), 1);
  }
  std::filesystem::remove(path);
}

TEST(Presets, UnknownNameListsAvailablePresets) {
  setenv("LOGFLOW_PRESETS", LOGFLOW_PRESET_DIR, 1);
  try {
    load_preset("no-such-preset");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("quadratic-exact"), std::string::npos);
  }
}

// Property: every bundled preset survives a YAML round trip unchanged.
TEST(Presets, ResolvedYamlRoundTrips) {
  setenv("LOGFLOW_PRESETS", LOGFLOW_PRESET_DIR, 1);
  const auto names = preset_names();
  ASSERT_GE(names.size(), 10u);
  for (const std::string& name : names) {
    SCOPED_TRACE(name);
    const ExperimentConfig c = load_preset(name);
    const std::string once = to_yaml(c);
    const ExperimentConfig back = parse_config(once);
    EXPECT_EQ(to_yaml(back), once);
    EXPECT_EQ(back.grid, c.grid);
    EXPECT_EQ(back.initial.A, c.initial.A);
    EXPECT_EQ(back.checks.size(), c.checks.size());
  }
}
