#include "logflow/app/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace logflow::app {
namespace {

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

template <typename E>
struct EnumTable {
  std::vector<std::pair<E, const char*>> entries;

  E parse(const YAML::Node& n, const std::string& key) const {
    const std::string v = n.as<std::string>();
    for (const auto& [e, name] : entries)
      if (v == name) return e;
    std::string list;
    for (const auto& [e, name] : entries) list += std::string(list.empty() ? "" : ", ") + name;
    throw ConfigError(key + ": unknown value '" + v + "' (expected one of: " + list + ")", line_of(n));
  }
  std::string name(E e) const {
    for (const auto& [x, name] : entries)
      if (x == e) return name;
    return "?";
  }
};

const EnumTable<Pipeline> kPipelines{{{Pipeline::Flow, "flow"}, {Pipeline::Heat, "heat"}, {Pipeline::Expander, "expander"}}};
const EnumTable<AnalysisKind> kAnalyses{{{AnalysisKind::None, "none"},
                                         {AnalysisKind::Decay, "decay"},
                                         {AnalysisKind::Blowdown, "blowdown"},
                                         {AnalysisKind::Plane, "plane"},
                                         {AnalysisKind::DualFlow, "dual_flow"},
                                         {AnalysisKind::Mcf, "mcf"},
                                         {AnalysisKind::Condition, "condition"}}};
const EnumTable<ScheduleKind> kSchedules{{{ScheduleKind::None, "none"},
                                          {ScheduleKind::List, "list"},
                                          {ScheduleKind::Uniform, "uniform"},
                                          {ScheduleKind::Geometric, "geometric"},
                                          {ScheduleKind::Triples, "triples"}}};
const EnumTable<BoundaryKind> kBoundaries{{{BoundaryKind::Default, "default"},
                                           {BoundaryKind::FarField, "far_field"},
                                           {BoundaryKind::Corner, "corner"},
                                           {BoundaryKind::Frozen, "frozen"}}};
const EnumTable<Stepper> kSteppers{{{Stepper::Midpoint, "midpoint"}, {Stepper::ForwardEuler, "euler"}}};
const EnumTable<SnapshotFormat> kFormats{{{SnapshotFormat::Binary, "binary"}, {SnapshotFormat::Csv, "csv"}}};

// A mapping node whose keys are consumed one by one; leftovers are errors.
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.IsMap()) throw ConfigError(path_ + " must be a mapping", line_of(node_));
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  YAML::Node child(const std::string& key) {
    used_.insert(key);
    return node_[key];
  }

  YAML::Node required(const std::string& key) {
    YAML::Node n = child(key);
    if (!n) throw ConfigError(qualified(key) + " is required", line_of(node_));
    return n;
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    YAML::Node n = child(key);
    if (!n) return fallback;
    return convert<T>(n, key);
  }

  template <typename T>
  T get_required(const std::string& key) {
    return convert<T>(required(key), key);
  }

  template <typename T>
  T convert(const YAML::Node& n, const std::string& key) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(qualified(key) + " has the wrong type", line_of(n));
    }
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  int line() const { return line_of(node_); }

  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!used_.count(key)) throw ConfigError("unknown key " + qualified(key), line_of(kv.first));
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

SymMat parse_matrix(const YAML::Node& n, int dim, const std::string& key) {
  try {
    if (n.IsScalar()) return SymMat::scaled_identity(dim, n.as<double>());
    if (!n.IsSequence() || static_cast<int>(n.size()) != dim)
      throw ConfigError(key + " must be a scalar, a diagonal of length n or an n x n matrix", line_of(n));
    SymMat A(dim);
    if (n[0].IsScalar()) {
      for (int i = 0; i < dim; ++i) A(i, i) = n[i].as<double>();
      return A;
    }
    for (int i = 0; i < dim; ++i) {
      if (!n[i].IsSequence() || static_cast<int>(n[i].size()) != dim)
        throw ConfigError(key + " row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries",
                          line_of(n[i]));
      for (int j = 0; j < dim; ++j) A(i, j) = n[i][j].as<double>();
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (A(i, j) != A(j, i)) throw ConfigError(key + " must be symmetric", line_of(n));
    return A;
  } catch (const YAML::Exception&) {
    throw ConfigError(key + " must contain numbers", line_of(n));
  }
}

Point parse_vector(const YAML::Node& n, int dim, const std::string& key) {
  Point p{};
  try {
    if (n.IsScalar()) {
      for (int k = 0; k < dim; ++k) p[k] = n.as<double>();
      return p;
    }
    if (!n.IsSequence() || static_cast<int>(n.size()) != dim)
      throw ConfigError(key + " must be a scalar or a list of length n", line_of(n));
    for (int k = 0; k < dim; ++k) p[k] = n[k].as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key + " must contain numbers", line_of(n));
  }
  return p;
}

ScheduleSpec parse_schedule(const YAML::Node& node) {
  Section s(node, "flow.snapshots");
  ScheduleSpec out;
  out.kind = kSchedules.parse(s.required("kind"), "flow.snapshots.kind");
  out.times = s.get<std::vector<double>>("times", {});
  out.start = s.get<double>("start", 0.0);
  out.every = s.get<double>("every", 0.0);
  out.t0 = s.get<double>("t0", 0.25);
  out.count = s.get<int>("count", 0);
  out.spacing_h2 = s.get<double>("spacing_h2", 4.0);
  s.finish();
  if (out.kind == ScheduleKind::Uniform && !(out.every > 0.0))
    throw ConfigError("flow.snapshots.every must be positive for a uniform schedule", s.line());
  if (out.kind == ScheduleKind::Geometric && (out.count < 1 || !(out.t0 > 0.0)))
    throw ConfigError("geometric schedule needs t0 > 0 and count >= 1", s.line());
  return out;
}

void check_range(bool ok, const std::string& what, const YAML::Node& n) {
  if (!ok) throw ConfigError(what, line_of(n));
}

ExperimentConfig parse_root(const YAML::Node& root) {
  Section top(root, "");
  ExperimentConfig c;
  c.name = top.get<std::string>("name", c.name);
  if (YAML::Node n = top.child("pipeline")) c.pipeline = kPipelines.parse(n, "pipeline");
  c.seed = top.get<std::uint64_t>("seed", 0);
  c.output = top.get<std::string>("output", "");
  if (YAML::Node n = top.child("snapshot_format")) c.snapshot_format = kFormats.parse(n, "snapshot_format");

  {
    YAML::Node gn = top.required("grid");
    Section g(gn, "grid");
    YAML::Node mn = g.required("m");
    c.grid.n = g.get_required<int>("n");
    c.grid.half_width = g.get_required<double>("L");
    c.grid.points_per_axis = g.convert<int>(mn, "m");
    c.grid.interior_margin = g.get<int>("margin", 0);
    g.finish();
    try {
      c.grid.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("grid: ") + e.what(), c.grid.points_per_axis < 5 ? line_of(mn) : g.line());
    }
  }
  const int n = c.grid.n;

  c.initial.n = n;
  c.initial.A = SymMat::identity(n);
  if (YAML::Node in = top.child("initial")) {
    Section s(in, "initial");
    YAML::Node kn = s.required("kind");
    try {
      c.initial.kind = parse_kind(kn.as<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError(std::string("initial.kind: ") + e.what(), line_of(kn));
    }
    if (YAML::Node a = s.child("A")) c.initial.A = parse_matrix(a, n, "initial.A");
    if (YAML::Node b = s.child("b")) c.initial.b = parse_vector(b, n, "initial.b");
    c.initial.c = s.get<double>("c", 0.0);
    c.initial.amplitude = s.get<double>("amplitude", 0.0);
    c.initial.width = s.get<double>("width", 1.0);
    c.initial.a_minus = s.get<double>("a_minus", 1.0);
    c.initial.a_plus = s.get<double>("a_plus", 1.0);
    c.noise = s.get<double>("noise", 0.0);
    s.finish();
    try {
      c.initial.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("initial: ") + e.what(), s.line());
    }
  } else if (c.pipeline != Pipeline::Expander) {
    throw ConfigError("initial is required for the " + kPipelines.name(c.pipeline) + " pipeline", top.line());
  }

  if (YAML::Node fn = top.child("flow")) {
    Section f(fn, "flow");
    YAML::Node tn = f.child("tau");
    c.flow.tau = tn ? f.convert<double>(tn, "tau") : 1.0;
    check_range(c.flow.tau >= 0.0 && c.flow.tau <= 1.0, "flow.tau must lie in [0, 1]", tn);
    YAML::Node en = f.child("t_end");
    c.flow.t_end = en ? f.convert<double>(en, "t_end") : 1.0;
    check_range(c.flow.t_end > 0.0, "flow.t_end must be positive", en);
    if (YAML::Node sn = f.child("stepper")) c.flow.stepper = kSteppers.parse(sn, "flow.stepper");
    c.flow.safety = f.get<double>("safety", 0.5);
    c.flow.dt_max = f.get<double>("dt_max", 0.0);
    c.flow.record_monitors = f.get<bool>("record_monitors", true);
    if (YAML::Node sn = f.child("snapshots")) c.flow.snapshots = parse_schedule(sn);
    if (YAML::Node mn = f.child("monitors")) {
      Section m(mn, "flow.monitors");
      c.flow.monitors.window_half_width = m.get<double>("window", 1.0);
      c.flow.monitors.third_derivative = m.get<bool>("third_derivative", true);
      m.finish();
    }
    if (YAML::Node bn = f.child("condition_b")) {
      const auto v = f.convert<std::vector<double>>(bn, "condition_b");
      check_range(v.size() == 2 && v[0] <= v[1], "flow.condition_b must be [lambda, Lambda]", bn);
      c.flow.condition_b = std::make_pair(v[0], v[1]);
    }
    f.finish();
  }

  c.boundary.A = SymMat::identity(n);
  if (YAML::Node bn = top.child("boundary")) {
    Section b(bn, "boundary");
    c.boundary.kind = kBoundaries.parse(b.required("kind"), "boundary.kind");
    if (YAML::Node a = b.child("A")) c.boundary.A = parse_matrix(a, n, "boundary.A");
    if (YAML::Node v = b.child("b")) c.boundary.b = parse_vector(v, n, "boundary.b");
    c.boundary.c = b.get<double>("c", 0.0);
    b.finish();
  }

  if (YAML::Node hn = top.child("heat")) {
    Section h(hn, "heat");
    c.heat.compare_flow = h.get<bool>("compare_flow", true);
    h.finish();
  }

  if (YAML::Node en = top.child("expander")) {
    Section e(en, "expander");
    c.expander.a = e.get<double>("a", 0.0);
    c.expander.slope = e.get<double>("slope", 0.0);
    c.expander.r_max = e.get<double>("r_max", 4.0);
    c.expander.tolerance = e.get<double>("tolerance", 1e-12);
    YAML::Node init = e.child("init");
    c.expander.init = init ? e.convert<std::string>(init, "init") : "profile";
    check_range(c.expander.init == "profile" || c.expander.init == "affine_quadratic",
                "expander.init must be 'profile' or 'affine_quadratic'", init);
    c.expander.noise = e.get<double>("noise", 0.0);
    c.expander.self_similar_times = e.get<std::vector<double>>("self_similar_times", c.expander.self_similar_times);
    c.expander.dt_probe = e.get<double>("dt_probe", 1e-3);
    e.finish();
  } else if (c.pipeline == Pipeline::Expander) {
    throw ConfigError("expander is required for the expander pipeline", top.line());
  }

  if (YAML::Node an = top.child("analysis")) {
    Section a(an, "analysis");
    AnalysisSpec& s = c.analysis;
    s.kind = kAnalyses.parse(a.required("kind"), "analysis.kind");
    s.orders = a.get<std::vector<int>>("orders", s.orders);
    s.eps0 = a.get<double>("eps0", s.eps0);
    s.window = a.get<double>("window", s.window);
    s.window_points = a.get<int>("window_points", s.window_points);
    s.tolerance = a.get<double>("tolerance", s.tolerance);
    s.t_from = a.get<double>("t_from", s.t_from);
    s.seeds_per_axis = a.get<int>("seeds_per_axis", s.seeds_per_axis);
    s.seed_extent = a.get<double>("seed_extent", s.seed_extent);
    s.t_begin = a.get<double>("t_begin", s.t_begin);
    s.control_scale = a.get<double>("control_scale", s.control_scale);
    s.threshold = a.get<double>("threshold", s.threshold);
    s.swap_constant = a.get<double>("swap_constant", s.swap_constant);
    s.lambda = a.get<double>("lambda", s.lambda);
    s.Lambda = a.get<double>("Lambda", s.Lambda);
    s.scales = a.get<std::vector<double>>("scales", s.scales);
    a.finish();
  }

  if (YAML::Node cn = top.child("checks")) {
    if (!cn.IsMap()) throw ConfigError("checks must be a mapping of metric to {min, max}", line_of(cn));
    for (const auto& kv : cn) {
      Check ch;
      ch.metric = kv.first.as<std::string>();
      ch.line = line_of(kv.first);
      Section b(kv.second, "checks." + ch.metric);
      if (b.has("min")) ch.min = b.get<double>("min", 0.0);
      if (b.has("max")) ch.max = b.get<double>("max", 0.0);
      b.finish();
      if (!ch.min && !ch.max) throw ConfigError("checks." + ch.metric + " needs min or max", ch.line);
      c.checks.push_back(ch);
    }
  }
  top.finish();
  return c;
}

void emit_matrix(YAML::Emitter& out, const SymMat& A) {
  out << YAML::Flow << YAML::BeginSeq;
  for (int i = 0; i < A.n; ++i) {
    out << YAML::Flow << YAML::BeginSeq;
    for (int j = 0; j < A.n; ++j) out << A(i, j);
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

void emit_vector(YAML::Emitter& out, const Point& p, int n) {
  out << YAML::Flow << YAML::BeginSeq;
  for (int k = 0; k < n; ++k) out << p[k];
  out << YAML::EndSeq;
}

template <typename T>
void emit_list(YAML::Emitter& out, const std::vector<T>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const T& x : v) out << x;
  out << YAML::EndSeq;
}

}  // namespace

std::string pipeline_name(Pipeline p) { return kPipelines.name(p); }
std::string analysis_name(AnalysisKind k) { return kAnalyses.name(k); }

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("syntax error: " + e.msg, e.mark.line + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("empty configuration", 0);
  try {
    return parse_root(root);
  } catch (const ConfigError&) {
    throw;
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.is_null() ? 0 : e.mark.line + 1);
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), 0);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw e.in(path.string());
  }
}

std::string to_yaml(const ExperimentConfig& c) {
  const int n = c.grid.n;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "pipeline" << YAML::Value << kPipelines.name(c.pipeline);
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "output" << YAML::Value << c.output;
  out << YAML::Key << "snapshot_format" << YAML::Value << kFormats.name(c.snapshot_format);

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n" << YAML::Value << n;
  out << YAML::Key << "L" << YAML::Value << c.grid.half_width;
  out << YAML::Key << "m" << YAML::Value << c.grid.points_per_axis;
  out << YAML::Key << "margin" << YAML::Value << c.grid.interior_margin;
  out << YAML::EndMap;

  if (c.pipeline != Pipeline::Expander) {
    out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << kind_name(c.initial.kind);
    out << YAML::Key << "A" << YAML::Value;
    emit_matrix(out, c.initial.A);
    out << YAML::Key << "b" << YAML::Value;
    emit_vector(out, c.initial.b, n);
    out << YAML::Key << "c" << YAML::Value << c.initial.c;
    out << YAML::Key << "amplitude" << YAML::Value << c.initial.amplitude;
    out << YAML::Key << "width" << YAML::Value << c.initial.width;
    out << YAML::Key << "a_minus" << YAML::Value << c.initial.a_minus;
    out << YAML::Key << "a_plus" << YAML::Value << c.initial.a_plus;
    out << YAML::Key << "noise" << YAML::Value << c.noise;
    out << YAML::EndMap;
  }

  out << YAML::Key << "flow" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tau" << YAML::Value << c.flow.tau;
  out << YAML::Key << "t_end" << YAML::Value << c.flow.t_end;
  out << YAML::Key << "stepper" << YAML::Value << kSteppers.name(c.flow.stepper);
  out << YAML::Key << "safety" << YAML::Value << c.flow.safety;
  out << YAML::Key << "dt_max" << YAML::Value << c.flow.dt_max;
  out << YAML::Key << "record_monitors" << YAML::Value << c.flow.record_monitors;
  out << YAML::Key << "snapshots" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << kSchedules.name(c.flow.snapshots.kind);
  out << YAML::Key << "times" << YAML::Value;
  emit_list(out, c.flow.snapshots.times);
  out << YAML::Key << "start" << YAML::Value << c.flow.snapshots.start;
  out << YAML::Key << "every" << YAML::Value << c.flow.snapshots.every;
  out << YAML::Key << "t0" << YAML::Value << c.flow.snapshots.t0;
  out << YAML::Key << "count" << YAML::Value << c.flow.snapshots.count;
  out << YAML::Key << "spacing_h2" << YAML::Value << c.flow.snapshots.spacing_h2;
  out << YAML::EndMap;
  out << YAML::Key << "monitors" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "window" << YAML::Value << c.flow.monitors.window_half_width;
  out << YAML::Key << "third_derivative" << YAML::Value << c.flow.monitors.third_derivative;
  out << YAML::EndMap;
  if (c.flow.condition_b) {
    out << YAML::Key << "condition_b" << YAML::Value;
    emit_list(out, std::vector<double>{c.flow.condition_b->first, c.flow.condition_b->second});
  }
  out << YAML::EndMap;

  out << YAML::Key << "boundary" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << kBoundaries.name(c.boundary.kind);
  out << YAML::Key << "A" << YAML::Value;
  emit_matrix(out, c.boundary.A);
  out << YAML::Key << "b" << YAML::Value;
  emit_vector(out, c.boundary.b, n);
  out << YAML::Key << "c" << YAML::Value << c.boundary.c;
  out << YAML::EndMap;

  out << YAML::Key << "heat" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "compare_flow" << YAML::Value << c.heat.compare_flow;
  out << YAML::EndMap;

  out << YAML::Key << "expander" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "a" << YAML::Value << c.expander.a;
  out << YAML::Key << "slope" << YAML::Value << c.expander.slope;
  out << YAML::Key << "r_max" << YAML::Value << c.expander.r_max;
  out << YAML::Key << "tolerance" << YAML::Value << c.expander.tolerance;
  out << YAML::Key << "init" << YAML::Value << c.expander.init;
  out << YAML::Key << "noise" << YAML::Value << c.expander.noise;
  out << YAML::Key << "self_similar_times" << YAML::Value;
  emit_list(out, c.expander.self_similar_times);
  out << YAML::Key << "dt_probe" << YAML::Value << c.expander.dt_probe;
  out << YAML::EndMap;

  const AnalysisSpec& a = c.analysis;
  out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << kAnalyses.name(a.kind);
  out << YAML::Key << "orders" << YAML::Value;
  emit_list(out, a.orders);
  out << YAML::Key << "eps0" << YAML::Value << a.eps0;
  out << YAML::Key << "window" << YAML::Value << a.window;
  out << YAML::Key << "window_points" << YAML::Value << a.window_points;
  out << YAML::Key << "tolerance" << YAML::Value << a.tolerance;
  out << YAML::Key << "t_from" << YAML::Value << a.t_from;
  out << YAML::Key << "seeds_per_axis" << YAML::Value << a.seeds_per_axis;
  out << YAML::Key << "seed_extent" << YAML::Value << a.seed_extent;
  out << YAML::Key << "t_begin" << YAML::Value << a.t_begin;
  out << YAML::Key << "control_scale" << YAML::Value << a.control_scale;
  out << YAML::Key << "threshold" << YAML::Value << a.threshold;
  out << YAML::Key << "swap_constant" << YAML::Value << a.swap_constant;
  out << YAML::Key << "lambda" << YAML::Value << a.lambda;
  out << YAML::Key << "Lambda" << YAML::Value << a.Lambda;
  out << YAML::Key << "scales" << YAML::Value;
  emit_list(out, a.scales);
  out << YAML::EndMap;

  if (!c.checks.empty()) {
    out << YAML::Key << "checks" << YAML::Value << YAML::BeginMap;
    for (const Check& ch : c.checks) {
      out << YAML::Key << ch.metric << YAML::Value << YAML::Flow << YAML::BeginMap;
      if (ch.min) out << YAML::Key << "min" << YAML::Value << *ch.min;
      if (ch.max) out << YAML::Key << "max" << YAML::Value << *ch.max;
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("LOGFLOW_PRESETS"); env && *env) return env;
#ifdef LOGFLOW_PRESET_SOURCE_DIR
  if (std::filesystem::is_directory(LOGFLOW_PRESET_SOURCE_DIR)) return LOGFLOW_PRESET_SOURCE_DIR;
#endif
#ifdef LOGFLOW_PRESET_INSTALL_DIR
  if (std::filesystem::is_directory(LOGFLOW_PRESET_INSTALL_DIR)) return LOGFLOW_PRESET_INSTALL_DIR;
#endif
  return "presets";
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  const auto dir = preset_directory();
  if (!std::filesystem::is_directory(dir)) return names;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".yaml") names.push_back(entry.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

ExperimentConfig load_preset(const std::string& name) {
  const auto path = preset_directory() / (name + ".yaml");
  if (!std::filesystem::is_regular_file(path)) {
    std::string list;
    for (const auto& p : preset_names()) list += (list.empty() ? "" : ", ") + p;
    throw ConfigError("unknown preset '" + name + "' (available: " + list + ")", 0);
  }
  return load_config(path);
}

ExperimentConfig resolve_config(const std::string& name_or_path) {
  if (std::filesystem::is_regular_file(name_or_path)) return load_config(name_or_path);
  return load_preset(name_or_path);
}

}  // namespace logflow::app
