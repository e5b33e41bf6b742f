#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "logflow/errors.hpp"
#include "logflow/flow.hpp"
#include "logflow/initial_data.hpp"
#include "logflow/snapshot.hpp"

namespace logflow::app {

/// Invalid configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// Same error with `context` (typically the file name) prepended.
  ConfigError in(const std::string& context) const { return ConfigError(context + ": " + what(), line_, 0); }
  int line() const { return line_; }

 private:
  ConfigError(const std::string& message, int line, int) : Error(message), line_(line) {}

  int line_;
};

enum class Pipeline { Flow, Heat, Expander };
enum class AnalysisKind { None, Decay, Blowdown, Plane, DualFlow, Mcf, Condition };
enum class ScheduleKind { None, List, Uniform, Geometric, Triples };
enum class BoundaryKind { Default, FarField, Corner, Frozen };

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::None;
  std::vector<double> times;
  /// uniform: start, every; geometric: t0 (doubling) and count.
  double start = 0.0;
  double every = 0.0;
  double t0 = 0.25;
  int count = 0;
  /// triples: snapshots at c - d, c, c + d for every centre c in `times`,
  /// d = spacing_h2 * h^2.
  double spacing_h2 = 4.0;
};

struct FlowSpec {
  double tau = 1.0;
  double t_end = 1.0;
  Stepper stepper = Stepper::Midpoint;
  double safety = 0.5;
  double dt_max = 0.0;
  ScheduleSpec snapshots;
  MonitorConfig monitors;
  bool record_monitors = true;
  /// Optional Condition B bounds checked at t = 0.
  std::optional<std::pair<double, double>> condition_b;
};

struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::Default;
  /// Far field for kind = far_field.
  SymMat A = SymMat::identity(1);
  Point b{};
  double c = 0.0;
};

struct HeatSpec {
  /// Also run the flow at tau = 0 and report the sup difference.
  bool compare_flow = true;
};

struct ExpanderSpec {
  double a = 0.0;
  double slope = 0.0;
  double r_max = 4.0;
  double tolerance = 1e-12;
  /// "profile" (profile samples plus seeded noise) or "affine_quadratic"
  /// (x^2/2 plus the affine function matching the boundary data, n = 1).
  std::string init = "profile";
  double noise = 0.0;
  std::vector<double> self_similar_times{1.0, 2.0, 4.0};
  double dt_probe = 1e-3;
};

struct AnalysisSpec {
  AnalysisKind kind = AnalysisKind::None;
  std::vector<int> orders{3, 4};
  double eps0 = 0.25;
  double window = 1.0;
  int window_points = 21;
  double tolerance = 0.02;
  double t_from = 1.0;
  /// mcf
  int seeds_per_axis = 3;
  double seed_extent = 0.5;
  double t_begin = 0.0;
  /// mcf negative control: snapshots scaled by this factor (0 = off).
  double control_scale = 0.0;
  double threshold = 5e-3;
  /// eigenvalue swap slack constant for dual_flow
  double swap_constant = 1.0;
  /// condition
  double lambda = 0.0;
  double Lambda = 0.0;
  std::vector<double> scales{2.0, 4.0};
};

struct Check {
  std::string metric;
  std::optional<double> min;
  std::optional<double> max;
  int line = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Pipeline pipeline = Pipeline::Flow;
  std::uint64_t seed = 0;
  std::string output;
  BoxDomain grid;
  InitialDataSpec initial;
  /// Uniform noise amplitude added to interior nodes of u0 (seeded).
  double noise = 0.0;
  FlowSpec flow;
  BoundarySpec boundary;
  HeatSpec heat;
  ExpanderSpec expander;
  AnalysisSpec analysis;
  SnapshotFormat snapshot_format = SnapshotFormat::Binary;
  std::vector<Check> checks;
};

/// Parses YAML (JSON is accepted as a subset). Unknown keys, missing required
/// keys and invariant violations raise ConfigError with the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Resolved configuration as YAML; parse_config(to_yaml(c)) reproduces c.
std::string to_yaml(const ExperimentConfig& config);

std::string pipeline_name(Pipeline p);
std::string analysis_name(AnalysisKind k);

/// Directory holding the bundled presets: $LOGFLOW_PRESETS if set, else the
/// installed or source location.
std::filesystem::path preset_directory();
std::vector<std::string> preset_names();
/// Throws ConfigError listing the available presets for unknown names.
ExperimentConfig load_preset(const std::string& name);
/// A path to an existing file is loaded as a config, anything else as a
/// preset name.
ExperimentConfig resolve_config(const std::string& name_or_path);

}  // namespace logflow::app
