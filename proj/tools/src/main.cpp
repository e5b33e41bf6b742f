#include <CLI11.hpp>

#include <iostream>
#include <json.hpp>

#include "logflow/analysis.hpp"
#include "logflow/app/artifacts.hpp"
#include "logflow/app/config.hpp"
#include "logflow/app/experiment.hpp"
#include "logflow/expander.hpp"
#include "logflow/legendre.hpp"
#include "logflow/mcf.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace logflow;
using namespace logflow::app;

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const AbortedNonConvex& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NonConvexityError& e) {
    std::cerr << "non-convex: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

// Accepts either a run directory or its snapshots/ subdirectory.
std::vector<Snapshot> load_trajectory(const fs::path& dir) {
  if (fs::is_directory(dir / "snapshots")) return read_trajectory(dir / "snapshots");
  return read_trajectory(dir);
}

void emit(const json& j, const fs::path& out_dir, const std::string& file) {
  std::cout << j.dump(2) << "\n";
  if (!out_dir.empty()) write_json(out_dir / file, j);
}

int run_pipeline(const fs::path& config_file, Pipeline pipeline, const RunOptions& opts) {
  ExperimentConfig cfg = load_config(config_file);
  if (cfg.pipeline != pipeline)
    throw ConfigError(config_file.string() + ": pipeline is " + pipeline_name(cfg.pipeline) + ", expected " +
                          pipeline_name(pipeline),
                      0);
  return run_experiment(cfg, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logflow: log-determinant flows, expanders and their diagnostics"};
  app.require_subcommand(1);
  int code = kExitOk;

  // run
  std::vector<std::string> targets;
  RunOptions run_opts;
  std::string run_output;
  auto* run = app.add_subcommand("run", "Run presets or config files");
  run->add_option("targets", targets, "Preset names or config paths")->required();
  run->add_option("--output,-o", run_output, "Output directory");
  run->add_flag("--check", run_opts.check, "Exit 4 when a configured check fails");
  run->add_flag("--quiet,-q", run_opts.quiet);
  run->callback([&] {
    code = guarded([&] {
      std::vector<ExperimentConfig> configs;
      for (const auto& t : targets) configs.push_back(resolve_config(t));
      run_opts.output = run_output;
      return run_experiments(configs, run_opts);
    });
  });

  auto* presets = app.add_subcommand("presets", "List the bundled presets");
  presets->callback([&] {
    code = guarded([&] {
      for (const auto& name : preset_names()) std::cout << name << "\n";
      return kExitOk;
    });
  });

  // flow / heat
  std::string config_path, pipe_output;
  bool pipe_check = false;
  auto* flow = app.add_subcommand("flow", "Evolve initial data under the flow");
  flow->require_subcommand(1);
  auto* flow_run = flow->add_subcommand("run", "Run a flow config");
  flow_run->add_option("--config,-c", config_path)->required();
  flow_run->add_option("--output,-o", pipe_output);
  flow_run->add_flag("--check", pipe_check);
  flow_run->callback([&] {
    code = guarded([&] { return run_pipeline(config_path, Pipeline::Flow, {pipe_output, pipe_check, false}); });
  });

  auto* heat = app.add_subcommand("heat", "Heat-equation reference solver");
  heat->require_subcommand(1);
  auto* heat_solve_cmd = heat->add_subcommand("solve", "Run a heat config");
  heat_solve_cmd->add_option("--config,-c", config_path)->required();
  heat_solve_cmd->add_option("--output,-o", pipe_output);
  heat_solve_cmd->add_flag("--check", pipe_check);
  heat_solve_cmd->callback([&] {
    code = guarded([&] { return run_pipeline(config_path, Pipeline::Heat, {pipe_output, pipe_check, false}); });
  });

  // expander
  auto* expander = app.add_subcommand("expander", "Self-similar expanders");
  expander->require_subcommand(1);
  RadialExpanderProblem prob;
  std::string shoot_output;
  auto* shoot = expander->add_subcommand("shoot", "Integrate the radial profile");
  shoot->add_option("--n", prob.n)->required()->check(CLI::Range(1, 3));
  shoot->add_option("--a", prob.a)->required();
  shoot->add_option("--rmax", prob.r_max)->required();
  shoot->add_option("--slope", prob.slope, "Initial slope (n = 1 only)");
  shoot->add_option("--tolerance", prob.tolerance);
  shoot->add_option("--output,-o", shoot_output, "Profile CSV (default: stdout)");
  shoot->callback([&] {
    code = guarded([&] {
      const std::string csv = profile_csv(radial_shoot(prob));
      if (shoot_output.empty()) std::cout << csv;
      else write_text(shoot_output, csv);
      return kExitOk;
    });
  });
  auto* newton = expander->add_subcommand("newton", "Solve the expander equation on a grid");
  newton->add_option("--config,-c", config_path)->required();
  newton->add_option("--output,-o", pipe_output);
  newton->add_flag("--check", pipe_check);
  newton->callback([&] {
    code = guarded([&] { return run_pipeline(config_path, Pipeline::Expander, {pipe_output, pipe_check, false}); });
  });
  std::string input_path, output_path;
  auto* cert = expander->add_subcommand("certify", "Certify a candidate expander snapshot");
  cert->add_option("--input,-i", input_path)->required();
  cert->add_option("--output,-o", output_path, "Write the certification JSON here");
  cert->callback([&] {
    code = guarded([&] {
      const json j = to_json(certify(read_snapshot(input_path).u));
      std::cout << j.dump(2) << "\n";
      if (!output_path.empty()) write_json(output_path, j);
      return kExitOk;
    });
  });

  // legendre
  auto* legendre = app.add_subcommand("legendre", "Discrete Legendre transform");
  legendre->require_subcommand(1);
  int dual_points = 0;
  auto* transform = legendre->add_subcommand("transform", "Transform a snapshot");
  transform->add_option("--input,-i", input_path)->required();
  transform->add_option("--output,-o", output_path)->required();
  transform->add_option("--points", dual_points, "Dual grid points per axis (default: same as input)");
  transform->callback([&] {
    code = guarded([&] {
      const Snapshot s = read_snapshot(input_path);
      const GridFunction dual = legendre_transform(s.u, auto_dual_domain(s.u, dual_points));
      write_snapshot(output_path, Snapshot{dual.relabeled("dual"), s.t, s.tau}, detect_format(output_path));
      return kExitOk;
    });
  });
  std::string traj_path, out_dir;
  double swap_constant = 1.0;
  auto* check_dual = legendre->add_subcommand("check-dual", "Check the dual flow along a trajectory");
  check_dual->add_option("--trajectory,-t", traj_path)->required();
  check_dual->add_option("--swap-constant", swap_constant);
  check_dual->add_option("--output,-o", out_dir);
  check_dual->callback([&] {
    code = guarded([&] {
      const DualFlowReport r = dual_flow_check(load_trajectory(traj_path), std::nullopt, swap_constant);
      json swaps = json::array();
      for (const auto& s : r.swaps) swaps.push_back({{"t", s.t}, {"slack", s.slack}, {"holds", s.holds}});
      emit({{"dual_flow",
             {{"residual", r.residual},
              {"times", r.times},
              {"residual_per_time", r.residual_per_time},
              {"eigen_swap_holds", r.eigen_swap_holds},
              {"swaps", swaps}}}},
           out_dir, "report.json");
      return kExitOk;
    });
  });

  // mcf
  auto* mcf = app.add_subcommand("mcf", "Mean-curvature-flow reconstruction");
  mcf->require_subcommand(1);
  std::string seeds_path;
  double threshold = 5e-3;
  auto* recon = mcf->add_subcommand("reconstruct", "Trace particles and compare with mean curvature");
  recon->add_option("--trajectory,-t", traj_path)->required();
  recon->add_option("--seeds,-s", seeds_path)->required();
  recon->add_option("--threshold", threshold);
  recon->add_option("--output,-o", output_path, "Path CSV (default: stdout)");
  recon->callback([&] {
    code = guarded([&] {
      const auto traj = load_trajectory(traj_path);
      if (traj.empty()) throw MissingArtifact("no snapshots in " + traj_path);
      const auto paths = integrate_particles(traj, read_seeds(seeds_path, traj.front().u.domain().n));
      const std::string csv = paths_csv(paths, traj);
      const McfReport r = verify_mcf(paths, traj, threshold);
      if (output_path.empty()) std::cout << csv;
      else write_text(output_path, csv);
      std::cerr << "max deviation " << r.max_deviation << (r.flagged ? " (flagged)" : "") << "\n";
      return kExitOk;
    });
  });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Asymptotic diagnostics");
  analyze->require_subcommand(1);
  auto* blowdown = analyze->add_subcommand("blowdown", "Run a blow-down experiment");
  blowdown->add_option("--config,-c", config_path)->required();
  blowdown->add_option("--output,-o", pipe_output);
  blowdown->add_flag("--check", pipe_check);
  blowdown->callback([&] {
    code = guarded([&] {
      ExperimentConfig cfg = load_config(config_path);
      if (cfg.analysis.kind != AnalysisKind::Blowdown)
        throw ConfigError(config_path + ": analysis.kind must be blowdown", 0);
      return run_experiment(cfg, {pipe_output, pipe_check, false});
    });
  });
  int order = 3;
  double eps0 = 0.25;
  auto* decay = analyze->add_subcommand("decay", "Fit the decay of a derivative norm");
  decay->add_option("--trajectory,-t", traj_path)->required();
  decay->add_option("--order,-l", order)->required()->check(CLI::Range(2, 4));
  decay->add_option("--eps0", eps0);
  decay->add_option("--output,-o", out_dir);
  decay->callback([&] {
    code = guarded([&] {
      emit(to_json(fit_decay(load_trajectory(traj_path), order, eps0)), out_dir, "ratefit.json");
      return kExitOk;
    });
  });
  double window = 1.0, tolerance = 0.02, t_from = 1.0;
  auto* plane = analyze->add_subcommand("plane", "Check convergence to a plane");
  plane->add_option("--trajectory,-t", traj_path)->required();
  plane->add_option("--window", window);
  plane->add_option("--tolerance", tolerance);
  plane->add_option("--t-from", t_from);
  plane->add_option("--output,-o", out_dir);
  plane->callback([&] {
    code = guarded([&] {
      const PlaneReport r = plane_convergence(load_trajectory(traj_path), window, tolerance, t_from);
      emit({{"plane",
             {{"hypothesis_ok", r.hypothesis_ok},
              {"note", r.note},
              {"t", r.t},
              {"affine_deviation", r.affine_deviation},
              {"max_gradient", r.max_gradient},
              {"tolerance", r.tolerance},
              {"pass", r.pass}}}},
           out_dir, "report.json");
      return kExitOk;
    });
  });
  double lambda = 0.0, Lambda = 0.0;
  std::vector<double> scales{2.0, 4.0};
  auto* condition = analyze->add_subcommand("condition", "Check the Hessian bounds and scaling condition");
  condition->add_option("--input,-i", input_path)->required();
  condition->add_option("--lambda", lambda)->required();
  condition->add_option("--Lambda", Lambda)->required();
  condition->add_option("--scales", scales);
  condition->add_option("--output,-o", out_dir);
  condition->callback([&] {
    code = guarded([&] {
      const Snapshot s = read_snapshot(input_path);
      const ConditionBReport b = check_condition_B(s.u, lambda, Lambda);
      json j{{"B_pass", b.pass},
             {"bounds", {b.bounds.lambda_min, b.bounds.lambda_max}},
             {"lambda", b.lambda},
             {"Lambda", b.Lambda},
             {"tolerance", b.tolerance}};
      try {
        j["A_defect"] = check_condition_A(s.u, scales);
      } catch (const EmptyCoincidenceError& e) {
        j["A_note"] = e.what();
      }
      emit({{"condition", j}}, out_dir, "report.json");
      return kExitOk;
    });
  });

  // emit / convert
  std::string emit_dir;
  auto* emit_cmd = app.add_subcommand("emit", "Write plotdata.csv for a run directory");
  emit_cmd->add_option("--dir,-d", emit_dir)->required();
  emit_cmd->callback([&] {
    code = guarded([&] {
      std::cout << emit_plotdata(emit_dir).string() << "\n";
      return kExitOk;
    });
  });
  std::string format = "csv";
  auto* convert = app.add_subcommand("convert", "Convert a snapshot between binary and CSV");
  convert->add_option("--input,-i", input_path)->required();
  convert->add_option("--output,-o", output_path)->required();
  convert->add_option("--format,-f", format)->check(CLI::IsMember({"csv", "binary"}));
  convert->callback([&] {
    code = guarded([&] {
      convert_snapshot(input_path, output_path, format == "csv" ? SnapshotFormat::Csv : SnapshotFormat::Binary);
      return kExitOk;
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return code;
}
