// Command-line front end: synthetic instance generation, method runs,
// phase-transition sweeps, and ablations. All outputs are deterministic for
// a fixed seed; wall-time fields are the only exception.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tride/eval.hpp"
#include "tride/gnlm.hpp"
#include "tride/scene_io.hpp"

namespace {

using nlohmann::json;
using namespace tride;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GraphKind parse_model(const std::string& name) {
  if (name == "complete") return GraphKind::kComplete;
  if (name == "er") return GraphKind::kErdosRenyi;
  if (name == "rgg") return GraphKind::kGeometric;
  throw CLI::ValidationError("--model", "expected complete, er, or rgg");
}

WeightMode parse_mode(const std::string& name) {
  if (name == "dynamic") return WeightMode::kDynamic;
  if (name == "static") return WeightMode::kStatic;
  if (name == "uniform") return WeightMode::kUniform;
  if (name == "point-only") return WeightMode::kPointOnly;
  throw CLI::ValidationError("--mode", "expected dynamic, static, uniform, or point-only");
}

InitMethod parse_init(const std::string& name) {
  if (name == "pca") return InitMethod::kPca;
  if (name == "fms") return InitMethod::kFms;
  if (name == "random") return InitMethod::kRandom;
  throw CLI::ValidationError("--init", "expected pca, fms, or random");
}

// "a,b,c" or "lo:hi:step" (inclusive endpoints).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    double lo, hi, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
      throw CLI::ValidationError("grid", "expected lo:hi:step with step > 0");
    const int count = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
    for (int i = 0; i < count; ++i) values.push_back(lo + i * step);
    return values;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    values.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return values;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_grid(text)) values.push_back(static_cast<int>(v));
  return values;
}

json stats_to_json(const ErrorStats& stats) {
  return json{{"mean_deg", stats.mean_deg},
              {"median_deg", stats.median_deg},
              {"p90_deg", stats.p90_deg}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

struct GenArgs {
  std::string model = "complete";
  int n = 0;
  double p = 0.5;
  double r = 0.5;
  int matches = 80;
  double inlier_frac = 1.0;
  double noise_deg = 0.0;
  double corrupt_q = 0.0;
  double corrupt_frac = 0.8;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  GraphModel model{parse_model(args.model), args.n, args.p, args.r};
  Scene scene = gen_scene(model, args.seed);
  for (int e = 0; e < scene.graph.n_edges(); ++e) {
    StreamRng rng(args.seed, StreamKind::kEvidence, static_cast<std::uint64_t>(e));
    scene.graph.set_evidence(
        e, gen_evidence(scene.truth.directions[e], args.matches, args.inlier_frac,
                        args.noise_deg, rng));
  }
  CorruptionSpec spec{args.corrupt_q, args.corrupt_frac, args.noise_deg};
  std::vector<std::uint8_t> mask = corrupt(scene.graph, spec, args.seed);

  SceneFile file;
  file.graph = std::move(scene.graph);
  file.truth = std::move(scene.truth);
  file.corrupt_mask = std::move(mask);
  save_scene(file, args.out);
  std::cerr << "wrote " << args.out << " (" << file.graph.n_edges() << " edges)\n";
  return 0;
}

struct RunArgs {
  std::string scene;
  std::string init = "pca";
  std::string method = "tride";
  std::string mode = "dynamic";
  SweepConfig config;
  GnConfig gn;
  LmConfig lm;
  int threads = 1;
  bool per_edge = false;
  std::string out;
};

int cmd_run(const RunArgs& args) {
  const auto t_load = std::chrono::steady_clock::now();
  SceneFile scene = load_scene(args.scene);
  const TriangleIndex tri = enumerate_triangles(scene.graph);
  const double load_s = seconds_since(t_load);

  SweepConfig config = args.config;
  config.mode = parse_mode(args.mode);
  config.validate();

  const auto t_init = std::chrono::steady_clock::now();
  const InitResult init =
      initialize(scene.graph, parse_init(args.init), config.sigma_deg, config.seed);
  for (int e : init.fallback_edges)
    std::cerr << "warning: edge " << e << " lacks evidence, random fallback\n";
  const double init_s = seconds_since(t_init);

  json report;
  report["config"] = {
      {"scene", args.scene},
      {"init", args.init},
      {"method", args.method},
      {"mode", args.mode},
      {"sigma_deg", config.sigma_deg},
      {"n_cand", config.n_cand},
      {"beta", config.beta},
      {"a_min", config.a_min},
      {"k_max", config.k_max},
      {"tau_stop_deg", config.tau_stop_deg},
      {"seed", config.seed},
  };
  report["scene_stats"] = {
      {"n_cam", scene.graph.n_cameras()},
      {"n_edges", scene.graph.n_edges()},
      {"n_triangles", tri.n_triangles()},
  };

  const auto t_refine = std::chrono::steady_clock::now();
  std::vector<Direction> estimate = init.directions;
  if (args.method == "tride") {
    const RunResult result = run(scene.graph, tri, init, config, args.threads);
    estimate = result.field.directions;
    json sweeps = json::array();
    for (const SweepStats& s : result.report.sweeps)
      sweeps.push_back({{"delta_deg", s.delta_deg},
                        {"changed_edges", s.changed_edges},
                        {"score_evals", s.score_evals},
                        {"wall_time_s", s.wall_time_s}});
    report["sweeps"] = std::move(sweeps);
  } else if (args.method == "gn") {
    GnConfig gn = args.gn;
    gn.a_min = config.a_min;
    const GnTrace trace = run_gn(make_tangent_state(init.directions), tri, gn);
    estimate = trace.state.directions;
    report["gn_residual_trace"] = trace.max_abs_residual;
    report["gn_solve_failed"] = trace.solve_failed;
  } else if (args.method == "lm") {
    LmConfig lm = args.lm;
    lm.a_min = config.a_min;
    lm.beta = config.beta;
    const LmTrace trace =
        run_lm(make_tangent_state(init.directions), scene.graph, tri, lm);
    estimate = trace.state.directions;
    report["lm_accepted_objectives"] = trace.accepted_objectives;
  } else if (args.method != "none") {
    throw CLI::ValidationError("--method", "expected none, tride, gn, or lm");
  }
  const double refine_s = seconds_since(t_refine);

  report["init_fallback_edges"] = init.fallback_edges.size();
  if (scene.truth) {
    report["stats_before"] = stats_to_json(direction_error_stats(init.directions,
                                                                 *scene.truth));
    report["stats_after"] =
        stats_to_json(direction_error_stats(estimate, *scene.truth));
    if (args.per_edge) {
      report["per_edge_error_before_deg"] =
          per_edge_error_deg(init.directions, *scene.truth);
      report["per_edge_error_deg"] = per_edge_error_deg(estimate, *scene.truth);
    }
  }
  report["wall_time_load_s"] = load_s;
  report["wall_time_init_s"] = init_s;
  report["wall_time_refine_s"] = refine_s;

  write_text(args.out, report.dump(1) + "\n");
  return 0;
}

struct PhaseArgs {
  std::string model = "complete";
  std::string n_grid = "20";
  std::string q_grid = "0:0.9:0.1";
  double p = 0.5;
  double r = 0.5;
  int seeds = 5;
  int sweeps = 1;
  double tol_deg = 1e-6;
  double anchor_support = 0.9;
  double weak_support = 0.05;
  double true_inlier_frac = 0.5;
  int matches = 40;
  SweepConfig config;
  int threads = 1;
  std::string out;
};

int cmd_phase(const PhaseArgs& args) {
  PhaseGrid grid;
  const GraphKind kind = parse_model(args.model);
  for (int n : parse_int_grid(args.n_grid))
    grid.models.push_back({kind, n, args.p, args.r});
  grid.q_grid = parse_grid(args.q_grid);
  grid.seeds = args.seeds;
  grid.sweeps = args.sweeps;
  grid.tol_deg = args.tol_deg;
  grid.anchor_support = args.anchor_support;
  grid.weak_support = args.weak_support;
  grid.true_inlier_frac = args.true_inlier_frac;
  grid.matches = args.matches;
  if (grid.models.empty() || grid.q_grid.empty() || grid.seeds <= 0)
    throw CLI::ValidationError("--n-grid/--q-grid/--seeds", "empty grid");

  const auto points = phase_sweep(grid, args.config, args.config.seed, args.threads);

  std::string csv = "model,n,p_or_r,q,seeds,recovery_fraction,mean_error_deg\n";
  for (const PhasePoint& point : points) {
    csv += args.model;
    csv += "," + std::to_string(point.n);
    csv += "," + format_double(point.p_or_r);
    csv += "," + format_double(point.q);
    csv += "," + std::to_string(point.seeds);
    csv += "," + format_double(point.recovery);
    csv += "," + format_double(point.mean_error_deg);
    csv += "\n";
  }
  write_text(args.out, csv);
  return 0;
}

struct AblateArgs {
  std::string scene;
  std::string init = "pca";
  std::string variants = "input,point-only,uniform,static,dynamic";
  SweepConfig config;
  int threads = 1;
  std::string out;
};

int cmd_ablate(const AblateArgs& args) {
  SceneFile scene = load_scene(args.scene);
  if (!scene.truth)
    throw std::runtime_error("ablate: scene has no ground truth");
  const TriangleIndex tri = enumerate_triangles(scene.graph);
  const InitResult init = initialize(scene.graph, parse_init(args.init),
                                     args.config.sigma_deg, args.config.seed);

  std::vector<AblationVariant> variants;
  std::size_t pos = 0;
  while (pos < args.variants.size()) {
    std::size_t next = args.variants.find(',', pos);
    if (next == std::string::npos) next = args.variants.size();
    const std::string name = args.variants.substr(pos, next - pos);
    pos = next + 1;
    if (name == "input") variants.push_back(AblationVariant::kInput);
    else if (name == "point-only") variants.push_back(AblationVariant::kPointOnly);
    else if (name == "uniform") variants.push_back(AblationVariant::kUniform);
    else if (name == "static") variants.push_back(AblationVariant::kStatic);
    else if (name == "dynamic") variants.push_back(AblationVariant::kDynamic);
    else throw CLI::ValidationError("--variants", "unknown variant " + name);
  }
  if (variants.empty()) throw CLI::ValidationError("--variants", "empty list");

  const auto rows = ablation_run(scene.graph, tri, *scene.truth, init, variants,
                                 args.config, args.threads);
  std::string csv = "variant,mean_deg,median_deg,p90_deg\n";
  for (const AblationRow& row : rows) {
    csv += variant_name(row.variant);
    csv += "," + format_double(row.stats.mean_deg);
    csv += "," + format_double(row.stats.median_deg);
    csv += "," + format_double(row.stats.p90_deg);
    csv += "\n";
  }
  write_text(args.out, csv);
  return 0;
}

void add_sweep_options(CLI::App* cmd, SweepConfig& config) {
  cmd->add_option("--sigma", config.sigma_deg, "support scale in degrees");
  cmd->add_option("--beta", config.beta, "triangle weight sharpness");
  cmd->add_option("--ncand", config.n_cand, "candidate budget per edge");
  cmd->add_option("--amin", config.a_min, "nondegeneracy threshold");
  cmd->add_option("--kmax", config.k_max, "maximum sweeps");
  cmd->add_option("--taustop", config.tau_stop_deg, "stopping tolerance in degrees");
  cmd->add_option("--seed", config.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triangle-weighted refinement of pairwise translation directions"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic scene file");
  gen->add_option("--model", gen_args.model, "complete, er, or rgg");
  gen->add_option("--n", gen_args.n, "camera count")->required();
  gen->add_option("--p", gen_args.p, "Erdos-Renyi edge probability");
  gen->add_option("--r", gen_args.r, "geometric connection radius");
  gen->add_option("--matches", gen_args.matches, "keypoint matches per edge");
  gen->add_option("--inlier-frac", gen_args.inlier_frac, "inlier fraction per edge");
  gen->add_option("--noise-deg", gen_args.noise_deg, "inlier noise scale");
  gen->add_option("--corrupt-q", gen_args.corrupt_q, "edge corruption probability");
  gen->add_option("--corrupt-frac", gen_args.corrupt_frac,
                  "match fraction replaced on corrupted edges");
  gen->add_option("--seed", gen_args.seed, "random seed");
  gen->add_option("--out", gen_args.out, "output scene path")->required();

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "initialize and refine a scene");
  run_cmd->add_option("--scene", run_args.scene, "scene file")->required();
  run_cmd->add_option("--init", run_args.init, "pca, fms, or random");
  run_cmd->add_option("--method", run_args.method, "none, tride, gn, or lm");
  run_cmd->add_option("--mode", run_args.mode,
                      "dynamic, static, uniform, or point-only");
  add_sweep_options(run_cmd, run_args.config);
  run_cmd->add_option("--threads", run_args.threads, "worker threads");
  run_cmd->add_option("--gn-iters", run_args.gn.iterations, "GN iterations");
  run_cmd->add_option("--gn-rho", run_args.gn.rho, "GN KKT regularizer");
  run_cmd->add_option("--lm-iters", run_args.lm.iterations, "LM iterations");
  run_cmd->add_option("--lm-kpt", run_args.lm.point_subset, "LM point subset size");
  run_cmd->add_option("--lm-cauchy-c", run_args.lm.cauchy_c, "LM Cauchy constant");
  run_cmd->add_option("--lm-lambda-tri", run_args.lm.lambda_tri,
                      "LM triangle term weight");
  run_cmd->add_option("--lm-mu0", run_args.lm.mu0, "LM initial damping");
  run_cmd->add_option("--lm-mu-up", run_args.lm.mu_up, "LM damping growth");
  run_cmd->add_option("--lm-mu-down", run_args.lm.mu_down, "LM damping shrink");
  run_cmd->add_flag("--per-edge", run_args.per_edge, "dump per-edge errors");
  run_cmd->add_option("--out", run_args.out, "report path (default stdout)");

  PhaseArgs phase_args;
  CLI::App* phase = app.add_subcommand("phase", "recovery curve over a (n, q) grid");
  phase->add_option("--model", phase_args.model, "complete, er, or rgg");
  phase->add_option("--n-grid", phase_args.n_grid, "camera counts, e.g. 20,40,80");
  phase->add_option("--q-grid", phase_args.q_grid, "weak-edge grid, e.g. 0:0.9:0.1");
  phase->add_option("--p", phase_args.p, "Erdos-Renyi edge probability");
  phase->add_option("--r", phase_args.r, "geometric connection radius");
  phase->add_option("--seeds", phase_args.seeds, "seeds per grid point");
  phase->add_option("--sweeps", phase_args.sweeps, "sweeps per run (0 = init only)");
  phase->add_option("--tol", phase_args.tol_deg, "recovery tolerance in degrees");
  phase->add_option("--anchor-support", phase_args.anchor_support,
                    "clean-edge support target");
  phase->add_option("--weak-support", phase_args.weak_support,
                    "weak-edge support target");
  phase->add_option("--true-inlier-frac", phase_args.true_inlier_frac,
                    "exact-inlier share on weak edges");
  phase->add_option("--matches", phase_args.matches, "normals per edge");
  add_sweep_options(phase, phase_args.config);
  phase->add_option("--threads", phase_args.threads, "worker threads");
  phase->add_option("--out", phase_args.out, "CSV path (default stdout)");

  AblateArgs ablate_args;
  CLI::App* ablate = app.add_subcommand("ablate", "per-variant error table");
  ablate->add_option("--scene", ablate_args.scene, "scene file")->required();
  ablate->add_option("--init", ablate_args.init, "pca, fms, or random");
  ablate->add_option("--variants", ablate_args.variants, "comma-separated variants");
  add_sweep_options(ablate, ablate_args.config);
  ablate->add_option("--threads", ablate_args.threads, "worker threads");
  ablate->add_option("--out", ablate_args.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_args);
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (phase->parsed()) return cmd_phase(phase_args);
    if (ablate->parsed()) return cmd_ablate(ablate_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    // Out-of-range flag values surface here (e.g. k_max < 1).
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
