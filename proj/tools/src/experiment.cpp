#include "logflow/app/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "logflow/analysis.hpp"
#include "logflow/app/artifacts.hpp"
#include "logflow/heat.hpp"
#include "logflow/legendre.hpp"
#include "logflow/mcf.hpp"

namespace logflow::app {
namespace {

using nlohmann::json;

double interior_sup(const GridFunction& u, const std::function<double(const Point&)>& ref) {
  double worst = 0.0;
  const BoxDomain& d = u.domain();
  for_each_node(d, 1, [&](std::size_t f, const Index& idx) {
    worst = std::max(worst, std::abs(u[f] - ref(d.coordinate(idx))));
  });
  return worst;
}

GridFunction scaled(const GridFunction& u, double factor) {
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x *= factor;
  return GridFunction(u.domain(), std::move(v), u.label());
}

std::vector<Point> seed_lattice(int n, int per_axis, double extent) {
  std::vector<double> axis;
  if (per_axis == 1) {
    axis.push_back(0.0);
  } else {
    for (int i = 0; i < per_axis; ++i) axis.push_back(-extent + 2.0 * extent * i / (per_axis - 1));
  }
  std::vector<Point> seeds;
  const int c1 = n >= 2 ? per_axis : 1, c2 = n >= 3 ? per_axis : 1;
  for (int a = 0; a < per_axis; ++a)
    for (int b = 0; b < c1; ++b)
      for (int c = 0; c < c2; ++c) {
        Point p{};
        p[0] = axis[a];
        if (n >= 2) p[1] = axis[b];
        if (n >= 3) p[2] = axis[c];
        seeds.push_back(p);
      }
  return seeds;
}

json bounds_json(const EigenBounds& b) { return json::array({b.lambda_min, b.lambda_max}); }

void flow_metrics(const ExperimentConfig& cfg, const RunResult& rr, json& metrics, json& report) {
  const FlowState& fs = rr.final_state;
  metrics["final_t"] = fs.t;
  metrics["steps"] = fs.step_count;

  if (cfg.noise == 0.0 && cfg.boundary.kind == BoundaryKind::Default)
    if (auto exact = exact_solution(cfg.initial, cfg.flow.tau)) {
      const double t = fs.t;
      metrics["sup_error"] = interior_sup(fs.u, [&](const Point& x) { return (*exact)(x, t); });
    }

  // Eigenvalue history: the monitor log when recorded, otherwise snapshots.
  std::vector<std::pair<double, EigenBounds>> history;
  for (const MonitorRecord& r : fs.monitor_log) history.push_back({r.t, {r.lambda_min, r.lambda_max}});
  if (history.empty())
    for (const Snapshot& s : rr.snapshots) history.push_back({s.t, hessian(s.u).bounds});
  if (!history.empty()) {
    const EigenBounds initial = history.front().second;
    EigenBounds all = initial;
    for (const auto& [t, b] : history) {
      all.lambda_min = std::min(all.lambda_min, b.lambda_min);
      all.lambda_max = std::max(all.lambda_max, b.lambda_max);
    }
    metrics["lambda_min_initial"] = initial.lambda_min;
    metrics["lambda_max_initial"] = initial.lambda_max;
    metrics["lambda_min_run"] = all.lambda_min;
    metrics["lambda_max_run"] = all.lambda_max;
    metrics["overshoot"] =
        std::max({0.0, initial.lambda_min - all.lambda_min, all.lambda_max - initial.lambda_max});
  }
  if (!fs.monitor_log.empty()) {
    double res = 0.0, grow = 0.0;
    for (std::size_t k = 0; k < fs.monitor_log.size(); ++k) {
      res = std::max(res, fs.monitor_log[k].residual);
      if (k > 0) grow = std::max(grow, fs.monitor_log[k].grad_sq_window - fs.monitor_log[k - 1].grad_sq_window);
    }
    metrics["monitor_residual_max"] = res;
    metrics["grad_sq_max_increase"] = grow;
  }
  report["snapshot_times"] = json::array();
  for (const Snapshot& s : rr.snapshots) report["snapshot_times"].push_back(s.t);
}

void decay_analysis(const ExperimentConfig& cfg, const std::vector<Snapshot>& traj, json& metrics, json& report) {
  report["ratefits"] = json::array();
  for (int order : cfg.analysis.orders) {
    const RateFit fit = fit_decay(traj, order, cfg.analysis.eps0);
    report["ratefits"].push_back(to_json(fit));
    const std::string key = "decay." + fit.quantity;
    metrics[key + ".identically_zero"] = fit.identically_zero;
    if (!fit.identically_zero) {
      metrics[key + ".exponent"] = fit.exponent;
      metrics[key + ".residual"] = fit.residual;
    }
  }
}

void blowdown_analysis(const ExperimentConfig& cfg, const std::vector<Snapshot>& traj, json& metrics, json& report) {
  const SymMat A = cfg.boundary.kind == BoundaryKind::FarField ? cfg.boundary.A : cfg.initial.A;
  const int n = cfg.grid.n;
  const double F = operator_value(A, cfg.flow.tau);
  auto U1 = [A, F](const Point& x) { return 0.5 * A.quadratic_form(x) + F; };
  const BoxDomain window{n, cfg.analysis.window, cfg.analysis.window_points, 0};
  const BlowdownReport rep = blowdown_convergence(traj, U1, window, cfg.analysis.tolerance);
  json j{{"t", rep.t},
         {"error", rep.error},
         {"decreasing", rep.decreasing},
         {"final_error", rep.final_error},
         {"tolerance", rep.tolerance},
         {"pass", rep.pass}};
  if (rep.fit) {
    j["fit"] = to_json(*rep.fit);
    metrics["blowdown.exponent"] = rep.fit->exponent;
  }
  report["blowdown"] = j;
  metrics["blowdown.final_error"] = rep.final_error;
  metrics["blowdown.decreasing"] = rep.decreasing;
  metrics["blowdown.pass"] = rep.pass;
}

void plane_analysis(const ExperimentConfig& cfg, const std::vector<Snapshot>& traj, json& metrics, json& report) {
  const PlaneReport rep = plane_convergence(traj, cfg.analysis.window, cfg.analysis.tolerance, cfg.analysis.t_from);
  report["plane"] = {{"hypothesis_ok", rep.hypothesis_ok},
                     {"note", rep.note},
                     {"t", rep.t},
                     {"affine_deviation", rep.affine_deviation},
                     {"max_gradient", rep.max_gradient},
                     {"tolerance", rep.tolerance},
                     {"pass", rep.pass}};
  metrics["plane.hypothesis_ok"] = rep.hypothesis_ok;
  metrics["plane.pass"] = rep.pass;
  if (!rep.max_gradient.empty()) metrics["plane.final_gradient"] = rep.max_gradient.back();
  if (!rep.affine_deviation.empty()) metrics["plane.final_affine_deviation"] = rep.affine_deviation.back();
}

void dual_flow_analysis(const ExperimentConfig& cfg, const std::vector<Snapshot>& traj, json& metrics,
                        json& report) {
  // Triples are checked one centre at a time so the time difference only
  // spans the closely spaced members of each triple.
  std::vector<std::vector<Snapshot>> groups;
  if (cfg.flow.snapshots.kind == ScheduleKind::Triples) {
    const double h = cfg.grid.spacing();
    const double delta = cfg.flow.snapshots.spacing_h2 * h * h;
    for (double c : cfg.flow.snapshots.times) {
      std::vector<Snapshot> g;
      for (double t : {c - delta, c, c + delta}) {
        auto it = std::find_if(traj.begin(), traj.end(),
                               [&](const Snapshot& s) { return std::abs(s.t - t) <= 1e-12 * (1.0 + t); });
        if (it == traj.end()) throw InsufficientSamples("no snapshot at t = " + std::to_string(t));
        g.push_back(*it);
      }
      groups.push_back(std::move(g));
    }
  } else {
    groups.push_back(traj);
  }

  BoxDomain yd = auto_dual_domain(groups.front().front().u);
  for (const auto& g : groups)
    for (const Snapshot& s : g) yd.half_width = std::min(yd.half_width, auto_dual_domain(s.u).half_width);

  double residual = 0.0;
  bool swaps = true;
  json per = json::array();
  for (const auto& g : groups) {
    const DualFlowReport rep = dual_flow_check(g, yd, cfg.analysis.swap_constant);
    residual = std::max(residual, rep.residual);
    swaps = swaps && rep.eigen_swap_holds;
    for (std::size_t k = 0; k < rep.times.size(); ++k)
      per.push_back({{"t", rep.times[k]}, {"residual", rep.residual_per_time[k]}});
    for (const EigenSwapRecord& s : rep.swaps)
      per.push_back({{"t", s.t},
                     {"primal", bounds_json(s.primal)},
                     {"dual", bounds_json(s.dual)},
                     {"slack", s.slack},
                     {"holds", s.holds}});
  }
  json times = json::array(), values = json::array();
  for (const auto& e : per)
    if (e.contains("residual")) {
      times.push_back(e["t"]);
      values.push_back(e["residual"]);
    }
  report["dual_flow"] = {{"residual", residual},
                         {"eigen_swap_holds", swaps},
                         {"y_half_width", yd.half_width},
                         {"y_points", yd.points_per_axis},
                         {"times", times},
                         {"residual_per_time", values},
                         {"records", per}};
  metrics["dual_flow.residual"] = residual;
  metrics["dual_flow.eigen_swap_holds"] = swaps;
}

void mcf_analysis(const ExperimentConfig& cfg, const std::vector<Snapshot>& traj, json& metrics, json& report,
                  std::vector<std::pair<std::string, std::string>>& tables) {
  std::vector<Snapshot> window;
  for (const Snapshot& s : traj)
    if (s.t >= cfg.analysis.t_begin - 1e-12) window.push_back(s);
  const auto seeds = seed_lattice(cfg.grid.n, cfg.analysis.seeds_per_axis, cfg.analysis.seed_extent);
  const auto paths = integrate_particles(window, seeds);
  const McfReport rep = verify_mcf(paths, window, cfg.analysis.threshold);
  auto to_j = [](const McfReport& r) {
    return json{{"max_deviation", r.max_deviation}, {"max_tangential", r.max_tangential},
                {"max_normal", r.max_normal},       {"max_curvature", r.max_curvature},
                {"samples", r.samples},             {"threshold", r.threshold},
                {"flagged", r.flagged}};
  };
  report["mcf"] = to_j(rep);
  metrics["mcf.max_deviation"] = rep.max_deviation;
  metrics["mcf.max_tangential"] = rep.max_tangential;
  metrics["mcf.max_normal"] = rep.max_normal;
  metrics["mcf.flagged"] = rep.flagged;
  tables.emplace_back("paths.csv", paths_csv(paths, window));

  if (cfg.analysis.control_scale > 0.0) {
    std::vector<Snapshot> corrupted = window;
    for (Snapshot& s : corrupted) s.u = scaled(s.u, cfg.analysis.control_scale);
    const McfReport ctl = verify_mcf(integrate_particles(corrupted, seeds), corrupted, cfg.analysis.threshold);
    report["mcf_control"] = to_j(ctl);
    metrics["mcf.control_deviation"] = ctl.max_deviation;
    metrics["mcf.control_flagged"] = ctl.flagged;
  }
}

void condition_analysis(const ExperimentConfig& cfg, const std::vector<Snapshot>& traj, json& metrics,
                        json& report) {
  json entries = json::array();
  const std::vector<const Snapshot*> picks{&traj.front(), &traj.back()};
  const char* names[] = {"initial", "final"};
  for (int k = 0; k < 2; ++k) {
    const Snapshot& s = *picks[k];
    const ConditionBReport b = check_condition_B(s.u, cfg.analysis.lambda, cfg.analysis.Lambda);
    const std::string key = std::string("condition.") + names[k];
    metrics[key + ".B_pass"] = b.pass;
    json e{{"t", s.t}, {"B_pass", b.pass}, {"bounds", bounds_json(b.bounds)}, {"tolerance", b.tolerance}};
    try {
      const double defect = check_condition_A(s.u, cfg.analysis.scales);
      metrics[key + ".A_defect"] = defect;
      e["A_defect"] = defect;
    } catch (const EmptyCoincidenceError& err) {
      e["A_note"] = err.what();
    }
    entries.push_back(e);
  }
  report["condition"] = entries;
}

ExperimentResult execute_flow(const ExperimentConfig& cfg) {
  ExperimentResult res;
  json metrics = json::object(), report = json::object(), warnings = json::array();
  const GridFunction u0 = initial_grid_function(cfg);
  const BoundaryModel boundary = boundary_model(cfg, u0);

  RunConfig rc;
  rc.step.stepper = cfg.flow.stepper;
  rc.step.monitors = cfg.flow.monitors;
  rc.safety = cfg.flow.safety;
  rc.dt_max = cfg.flow.dt_max;
  rc.snapshot_times = snapshot_times(cfg);
  rc.condition_b = cfg.flow.condition_b;
  rc.record_monitors = cfg.flow.record_monitors;
  const RunResult rr = run(u0, cfg.flow.tau, cfg.flow.t_end, boundary, rc);
  for (const std::string& w : rr.warnings) warnings.push_back(w);
  report["boundary"] = boundary_kind(boundary);
  flow_metrics(cfg, rr, metrics, report);

  const auto& traj = rr.snapshots;
  switch (cfg.analysis.kind) {
    case AnalysisKind::None: break;
    case AnalysisKind::Decay: decay_analysis(cfg, traj, metrics, report); break;
    case AnalysisKind::Blowdown: blowdown_analysis(cfg, traj, metrics, report); break;
    case AnalysisKind::Plane: plane_analysis(cfg, traj, metrics, report); break;
    case AnalysisKind::DualFlow: dual_flow_analysis(cfg, traj, metrics, report); break;
    case AnalysisKind::Mcf: mcf_analysis(cfg, traj, metrics, report, res.tables); break;
    case AnalysisKind::Condition: condition_analysis(cfg, traj, metrics, report); break;
  }

  res.snapshots = rr.snapshots;
  res.monitors = rr.final_state.monitor_log;
  res.summary = {{"metrics", metrics}, {"warnings", warnings}};
  res.report = report;
  return res;
}

ExperimentResult execute_heat(const ExperimentConfig& cfg) {
  ExperimentResult res;
  json metrics = json::object(), report = json::object();
  const auto ff = far_field(cfg.initial);
  if (!ff) throw ConfigError("heat pipeline needs quadratic far-field initial data", 0);
  const GridFunction u0 = initial_grid_function(cfg);
  const double t = cfg.flow.t_end;
  const GridFunction uh = heat_solve(u0, t, *ff);
  metrics["final_t"] = t;
  metrics["heat.tail_mass"] = heat_tail_mass(cfg.grid.n, cfg.grid.half_width, t);
  res.snapshots = {Snapshot{u0, 0.0, 0.0}, Snapshot{uh.relabeled("heat"), t, 0.0}};

  if (cfg.heat.compare_flow) {
    RunConfig rc;
    rc.step.stepper = cfg.flow.stepper;
    rc.safety = cfg.flow.safety;
    rc.dt_max = cfg.flow.dt_max;
    rc.record_monitors = false;
    const RunResult rr = run(u0, 0.0, t, boundary_model(cfg, u0), rc);
    const double diff = uh.interior_sup_distance(rr.final_state.u);
    metrics["heat.flow_difference"] = diff;
    metrics["steps"] = rr.final_state.step_count;
    report["flow_comparison"] = {{"sup_difference", diff}, {"steps", rr.final_state.step_count}};
  }
  res.summary = {{"metrics", metrics}, {"warnings", json::array()}};
  res.report = report;
  return res;
}

ExperimentResult execute_expander(const ExperimentConfig& cfg) {
  ExperimentResult res;
  json metrics = json::object(), report = json::object();
  const int n = cfg.grid.n;
  RadialExpanderProblem prob;
  prob.n = n;
  prob.a = cfg.expander.a;
  prob.slope = cfg.expander.slope;
  prob.r_max = cfg.expander.r_max;
  prob.tolerance = cfg.expander.tolerance;
  const ExpanderProfile profile = radial_shoot(prob);
  const GridFunction exact = sample_profile(profile, cfg.grid);
  const ReferenceSolution boundary = expander_flow(profile);

  std::vector<double> init(exact.values().begin(), exact.values().end());
  const BoxDomain& d = cfg.grid;
  if (cfg.expander.init == "affine_quadratic") {
    if (n != 1) throw ConfigError("expander.init affine_quadratic requires n = 1", 0);
    const double L = d.half_width;
    const double left = exact[0] - 0.5 * L * L, right = exact[init.size() - 1] - 0.5 * L * L;
    for (std::size_t f = 0; f < init.size(); ++f) {
      const double x = d.coordinate(f)[0];
      init[f] = 0.5 * x * x + 0.5 * (left + right) + 0.5 * (right - left) * x / L;
    }
  } else if (cfg.expander.noise > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-cfg.expander.noise, cfg.expander.noise);
    for_each_node(d, 1, [&](std::size_t f, const Index&) { init[f] += dist(rng); });
  }

  const ExpanderSolution sol = newton_solve(GridFunction(d, init, "newton_init"), boundary);
  metrics["expander.newton_iterations"] = sol.iterations;
  metrics["expander.newton_residual"] = sol.residual_norm;
  metrics["expander.profile_agreement"] = sol.u.interior_sup_distance(exact);
  report["newton"] = {{"iterations", sol.iterations},
                      {"residual_history", sol.residual_history},
                      {"condition_B", bounds_json(sol.condition_B)}};

  json ss = json::array();
  double worst = 0.0;
  auto trajectory = [&](double t) {
    return GridFunction::sample(d, [&](const Point& x) { return boundary.fn(x, t); });
  };
  for (double t : cfg.expander.self_similar_times) {
    const double r = pde_residual(trajectory, t, cfg.expander.dt_probe, 1.0);
    worst = std::max(worst, r);
    ss.push_back({{"t", t}, {"residual", r}});
  }
  metrics["expander.self_similar_residual"] = worst;
  report["self_similar"] = ss;

  const CertificationReport cert = certify(sol);
  report["certification"] = to_json(cert);
  metrics["certify.certified"] = cert.certified;
  metrics["certify.residual_norm"] = cert.residual_norm;
  metrics["certify.condition_A_defect"] = cert.condition_A_defect;
  metrics["certify.bernstein_residual"] = cert.bernstein_residual;
  metrics["certify.w_oscillation"] = cert.w_oscillation;

  res.snapshots = {Snapshot{sol.u.relabeled("expander"), 1.0, 1.0}};
  res.tables.emplace_back("profile.csv", profile_csv(profile));
  res.summary = {{"metrics", metrics}, {"warnings", json::array()}};
  res.report = report;
  return res;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

GridFunction initial_grid_function(const ExperimentConfig& config) {
  GridFunction u = sample_initial(config.initial, config.grid);
  if (config.noise <= 0.0) return u;
  std::vector<double> v(u.values().begin(), u.values().end());
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(-config.noise, config.noise);
  for_each_node(config.grid, 1, [&](std::size_t f, const Index&) { v[f] += dist(rng); });
  return GridFunction(config.grid, std::move(v), u.label());
}

BoundaryModel boundary_model(const ExperimentConfig& config, const GridFunction& u0) {
  switch (config.boundary.kind) {
    case BoundaryKind::Default: return default_boundary(config.initial, config.flow.tau);
    case BoundaryKind::FarField: return QuadraticFarField{config.boundary.A, config.boundary.b, config.boundary.c};
    case BoundaryKind::Corner: return corner_far_field(u0);
    case BoundaryKind::Frozen: return Frozen{};
  }
  return Frozen{};
}

std::vector<double> snapshot_times(const ExperimentConfig& config) {
  const ScheduleSpec& s = config.flow.snapshots;
  switch (s.kind) {
    case ScheduleKind::None: return {};
    case ScheduleKind::List: return s.times;
    case ScheduleKind::Uniform: return uniform_times(s.start, config.flow.t_end, s.every);
    case ScheduleKind::Geometric: return geometric_times(s.t0, s.count);
    case ScheduleKind::Triples: {
      const double h = config.grid.spacing();
      const double delta = s.spacing_h2 * h * h;
      std::vector<double> out;
      for (double c : s.times) {
        if (!(c - delta > 0.0)) throw ConfigError("triple centre " + std::to_string(c) + " too close to 0", 0);
        out.insert(out.end(), {c - delta, c, c + delta});
      }
      return out;
    }
  }
  return {};
}

ExperimentResult execute(const ExperimentConfig& config) {
  ExperimentResult res;
  switch (config.pipeline) {
    case Pipeline::Flow: res = execute_flow(config); break;
    case Pipeline::Heat: res = execute_heat(config); break;
    case Pipeline::Expander: res = execute_expander(config); break;
  }
  res.summary["name"] = config.name;
  res.summary["pipeline"] = pipeline_name(config.pipeline);
  res.summary["analysis"] = analysis_name(config.analysis.kind);
  res.report["name"] = config.name;
  res.checks = evaluate_checks(config.checks, res.summary);
  res.checks_passed = std::all_of(res.checks.begin(), res.checks.end(), [](const CheckOutcome& c) { return c.passed; });
  json checks = json::array();
  for (const CheckOutcome& c : res.checks) {
    json e{{"metric", c.check.metric}, {"present", c.present}, {"passed", c.passed}};
    if (c.present) e["value"] = c.value;
    if (c.check.min) e["min"] = *c.check.min;
    if (c.check.max) e["max"] = *c.check.max;
    checks.push_back(e);
  }
  res.summary["checks"] = checks;
  return res;
}

std::vector<CheckOutcome> evaluate_checks(const std::vector<Check>& checks, const nlohmann::json& summary) {
  std::vector<CheckOutcome> out;
  const json metrics = summary.contains("metrics") ? summary["metrics"] : json::object();
  for (const Check& c : checks) {
    CheckOutcome o{c};
    if (metrics.contains(c.metric)) {
      const json& v = metrics[c.metric];
      if (v.is_boolean()) {
        o.present = true;
        o.value = v.get<bool>() ? 1.0 : 0.0;
      } else if (v.is_number()) {
        o.present = true;
        o.value = v.get<double>();
      }
    }
    o.passed = o.present && (!c.min || o.value >= *c.min) && (!c.max || o.value <= *c.max);
    out.push_back(o);
  }
  return out;
}

void write_artifacts(const ExperimentConfig& config, const ExperimentResult& result,
                     const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  fs::remove(dir / "manifest.json");
  if (fs::exists(dir / "snapshots")) fs::remove_all(dir / "snapshots");

  write_text(dir / "config.yaml", to_yaml(config));
  write_trajectory(dir / "snapshots", result.snapshots, config.snapshot_format);
  write_text(dir / "monitors.csv", monitors_csv(result.monitors));
  write_json(dir / "summary.json", result.summary);
  write_json(dir / "report.json", result.report);
  if (result.report.contains("ratefits")) write_json(dir / "ratefit.json", result.report["ratefits"]);
  for (const auto& [name, content] : result.tables) write_text(dir / name, content);

  json files = json::array();
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const fs::path& p : paths)
    files.push_back({{"path", fs::relative(p, dir).generic_string()},
                     {"bytes", fs::file_size(p)},
                     {"sha256", sha256_hex(p)}});
  write_json(dir / "manifest.json", {{"created", timestamp()}, {"name", config.name}, {"files", files}});
}

int run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const std::filesystem::path dir = !options.output.empty() ? options.output
                                    : !config.output.empty() ? std::filesystem::path(config.output)
                                                             : std::filesystem::path("runs") / config.name;
  try {
    const ExperimentResult res = execute(config);
    write_artifacts(config, res, dir);
    if (!options.quiet) {
      std::ostringstream os;
      os << config.name << ": wrote " << dir.string() << "\n";
      for (const CheckOutcome& c : res.checks)
        os << "  " << (c.passed ? "ok   " : "FAIL ") << c.check.metric << " = "
           << c.value << (c.present ? "" : " (missing)") << "\n";
      std::cout << os.str();
    }
    if (options.check && !res.checks_passed) return kExitCheck;
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << config.name << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const AbortedNonConvex& e) {
    std::cerr << config.name << ": aborted: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NonConvexityError& e) {
    std::cerr << config.name << ": non-convex: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << config.name << ": error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int worker_count() {
  if (const char* env = std::getenv("LOGFLOW_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_experiments(const std::vector<ExperimentConfig>& configs, const RunOptions& options) {
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{0};
  auto work = [&] {
    for (std::size_t k = next++; k < configs.size(); k = next++) {
      RunOptions o = options;
      if (!options.output.empty() && configs.size() > 1) o.output = options.output / configs[k].name;
      const int code = run_experiment(configs[k], o);
      int cur = worst.load();
      while (code > cur && !worst.compare_exchange_weak(cur, code)) {
      }
    }
  };
  const int workers = std::min<int>(worker_count(), static_cast<int>(configs.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  return worst.load();
}

}  // namespace logflow::app
