// Command-line front end: scenario generation, solving, outlier detection,
// Monte Carlo experiments, and the exhaustive rotation-search oracle.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpgo/bruteforce.hpp"
#include "rpgo/detect.hpp"
#include "rpgo/harness.hpp"

namespace fs = std::filesystem;
using namespace rpgo;

namespace {

std::vector<Pose2> poses_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<Pose2> poses;
  for (const auto& jp : j.at("poses")) {
    Pose2 p;
    p.translation = Vec2(jp.at("x").get<double>(), jp.at("y").get<double>());
    p.rotation = rot_from_angle(jp.at("theta").get<double>());
    poses.push_back(p);
  }
  return poses;
}

nlohmann::json poses_to_json(const std::vector<Pose2>& poses) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : poses) {
    arr.push_back({{"x", p.translation.x()}, {"y", p.translation.y()}, {"theta", p.rotation.angle()}});
  }
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outlier-robust planar pose-graph optimization via convex relaxations"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "Generate a synthetic scenario (JSON and/or g2o)");
  std::string gen_config, gen_out = "scenario", gen_format = "json";
  ScenarioConfig cfg;
  std::string gen_topology = "erdos_renyi";
  gen->add_option("--config", gen_config, "scenario config file (key = value)");
  gen->add_option("--n", cfg.n, "node count");
  gen->add_option("--topology", gen_topology, "erdos_renyi | geometric | grid");
  gen->add_option("--p", cfg.p, "Erdos-Renyi edge probability");
  gen->add_option("--radius", cfg.radius, "geometric radius (0: env_size/4)");
  gen->add_option("--rows", cfg.rows, "grid rows");
  gen->add_option("--cols", cfg.cols, "grid cols");
  gen->add_option("--env-size", cfg.env_size, "environment side length, m");
  gen->add_option("--sigma-t", cfg.sigma_t, "inlier translation sigma, m");
  gen->add_option("--sigma-r", cfg.sigma_r, "inlier rotation sigma, rad");
  gen->add_option("--p-out", cfg.p_out, "outlier probability");
  gen->add_option("--seed", cfg.seed, "seed");
  gen->add_option("--out", gen_out, "output path base");
  gen->add_option("--format", gen_format, "json | g2o | both");

  // ---- solve ----
  auto* slv = app.add_subcommand("solve", "Solve a pose graph with one method");
  std::string slv_in, slv_method = "huber-2stage", slv_out;
  double slv_tol = 0.0;
  std::string slv_log;
  slv->add_option("--in", slv_in, "graph file (.json or .g2o)")->required();
  slv->add_option("--method", slv_method,
                  "l1-1stage|l1-2stage|l2-1stage|l2-2stage|huber-1stage|huber-2stage|gn");
  slv->add_option("--out", slv_out, "output JSON (poses + diagnostics)");
  slv->add_option("--tol", slv_tol, "solver eps_abs override");
  slv->add_option("--iter-log", slv_log, "per-iteration CSV log path");

  // ---- detect ----
  auto* det = app.add_subcommand("detect", "Residual-based outlier detection PR sweep");
  std::string det_in, det_poses, det_out = "pr.csv", det_method = "huber-2stage";
  det->add_option("--in", det_in, "graph file with outlier labels (.json)")->required();
  det->add_option("--poses", det_poses, "poses JSON (default: solve with --method)");
  det->add_option("--method", det_method, "method used when --poses is absent");
  det->add_option("--out", det_out, "PR CSV output");

  // ---- experiment ----
  auto* exp = app.add_subcommand("experiment", "Monte Carlo experiment from a plan file");
  std::string exp_plan, exp_out = ".";
  int exp_jobs = 0;
  std::uint64_t exp_seed = 0;
  exp->add_option("--plan", exp_plan, "plan JSON")->required();
  exp->add_option("--out", exp_out, "output directory");
  exp->add_option("--jobs", exp_jobs, "parallel trials (0: plan value)");
  exp->add_option("--seed", exp_seed, "master seed override");

  // ---- brute-force ----
  auto* bf = app.add_subcommand("brute-force",
                                "Exhaustive rotation-only grid search (oracle for small n)");
  std::string bf_in, bf_cost = "l2", bf_out;
  double bf_res = 1.0;
  bf->add_option("--in", bf_in, "graph file")->required();
  bf->add_option("--cost", bf_cost, "l2 | l1 | huber");
  bf->add_option("--resolution", bf_res, "grid resolution, degrees");
  bf->add_option("--out", bf_out, "result JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (!gen_config.empty()) {
        // file is the base; explicitly passed flags override it
        const ScenarioConfig from_flags = cfg;
        std::ifstream in(gen_config);
        if (!in) throw std::runtime_error("cannot open " + gen_config);
        cfg = parse_scenario_config(in);
        if (gen->count("--n")) cfg.n = from_flags.n;
        if (gen->count("--p")) cfg.p = from_flags.p;
        if (gen->count("--radius")) cfg.radius = from_flags.radius;
        if (gen->count("--rows")) cfg.rows = from_flags.rows;
        if (gen->count("--cols")) cfg.cols = from_flags.cols;
        if (gen->count("--env-size")) cfg.env_size = from_flags.env_size;
        if (gen->count("--sigma-t")) cfg.sigma_t = from_flags.sigma_t;
        if (gen->count("--sigma-r")) cfg.sigma_r = from_flags.sigma_r;
        if (gen->count("--p-out")) cfg.p_out = from_flags.p_out;
        if (gen->count("--seed")) cfg.seed = from_flags.seed;
        if (gen->count("--topology")) cfg.topology = topology_from_name(gen_topology);
      } else {
        cfg.topology = topology_from_name(gen_topology);
      }
      const PoseGraph g = generate_scenario(cfg);
      const auto violations = validate(g);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "invalid: " << v << "\n";
        return 1;
      }
      if (gen_format == "json" || gen_format == "both") {
        save_graph_json(gen_out + ".json", g);
        std::cout << "wrote " << gen_out << ".json (n=" << g.n << ", m=" << g.m() << ")\n";
      }
      if (gen_format == "g2o" || gen_format == "both") {
        std::ofstream out(gen_out + ".g2o");
        write_g2o(out, g, g.ground_truth);
        std::cout << "wrote " << gen_out << ".g2o\n";
      }
    } else if (*slv) {
      const PoseGraph g = load_graph(slv_in);
      const auto violations = validate(g);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "invalid graph: " << v << "\n";
        return 1;
      }
      SolveOptions opts;
      if (slv_tol > 0.0) opts.eps_abs = slv_tol;
      if (!slv_log.empty()) {
        opts.log_every = 10;
        opts.log_path = slv_log;
      }
      const Method m = method_from_name(slv_method);
      const MethodRecord rec = run_method(g, m, opts);
      if (!rec.solved) {
        std::cerr << "solve failed: " << rec.error << "\n";
        return 1;
      }
      nlohmann::json j;
      j["method"] = method_name(m);
      j["poses"] = poses_to_json(rec.poses);
      j["diagnostics"] = {{"converged", rec.converged},
                          {"relaxed_cost", rec.relaxed_cost},
                          {"rounded_cost", rec.rounded_cost},
                          {"gap_bound", rec.gap_bound},
                          {"tight", rec.tight},
                          {"stable_rank", rec.stable_rank},
                          {"numeric_rank", rec.numeric_rank},
                          {"wall_ms", rec.wall_ms}};
      if (g.has_ground_truth()) {
        const auto aligned = apply_transform(align_gauge(rec.poses, g.ground_truth), rec.poses);
        const auto [te, re] = error_metrics(aligned, g.ground_truth);
        j["diagnostics"]["trans_err"] = te;
        j["diagnostics"]["rot_err"] = re;
      }
      const std::string text = j.dump(2);
      if (slv_out.empty()) {
        std::cout << text << "\n";
      } else {
        std::ofstream out(slv_out);
        out << text << "\n";
        std::cout << "wrote " << slv_out << "\n";
      }
    } else if (*det) {
      const PoseGraph g = load_graph(det_in);
      if (!g.has_labels()) {
        std::cerr << "detect: graph carries no outlier labels; precision/recall needs them\n";
        return 1;
      }
      std::vector<Pose2> poses;
      std::string method_label = det_method;
      if (!det_poses.empty()) {
        poses = poses_from_json_file(det_poses);
        method_label = "external";
      } else {
        const MethodRecord rec = run_method(g, method_from_name(det_method));
        if (!rec.solved) {
          std::cerr << "detect: solve failed: " << rec.error << "\n";
          return 1;
        }
        poses = rec.poses;
      }
      const auto res = residuals(g, poses);
      const PrSweep sweep = pr_sweep(res, g.outlier_labels);
      std::ofstream out(det_out);
      out << "method,eta_t,eta_R,precision,recall\n";
      char buf[256];
      auto dump = [&](const std::vector<PrPoint>& pts) {
        for (const auto& p : pts) {
          std::snprintf(buf, sizeof(buf), "%s,%.8g,%.8g,%.8g,%.8g\n", method_label.c_str(),
                        p.eta_t, p.eta_R, p.precision, sweep.recall_defined ? p.recall : -1.0);
          out << buf;
        }
      };
      dump(sweep.joint);
      dump(sweep.trans_only);
      dump(sweep.rot_only);
      if (!sweep.recall_defined) {
        std::cerr << "note: no true outliers in this graph; recall is undefined (written as -1)\n";
      }
      std::cout << "wrote " << det_out << " (AUPR joint = " << pr_area(sweep.joint) << ")\n";
    } else if (*exp) {
      std::ifstream in(exp_plan);
      if (!in) throw std::runtime_error("cannot open " + exp_plan);
      std::ostringstream ss;
      ss << in.rdbuf();
      ExperimentPlan plan = ExperimentPlan::from_json(ss.str());
      if (exp_jobs > 0) plan.jobs = exp_jobs;
      if (exp_seed != 0) plan.master_seed = exp_seed;
      fs::create_directories(exp_out);
      const ExperimentResult result = run_experiment(plan);
      {
        std::ofstream out(fs::path(exp_out) / "results.csv");
        write_results_csv(out, plan, result);
      }
      {
        std::ofstream out(fs::path(exp_out) / "summary.csv");
        write_summary_csv(out, plan, result);
      }
      {
        std::ofstream out(fs::path(exp_out) / "plan_echo.json");
        out << plan.echo_json() << "\n";
      }
      int failures = 0;
      for (const auto& t : result.trials) {
        for (const auto& r : t.methods) {
          if (!r.solved) ++failures;
        }
      }
      std::cout << "wrote " << (fs::path(exp_out) / "results.csv").string() << " ("
                << result.trials.size() << " trials";
      if (failures > 0) std::cout << ", " << failures << " method failures flagged";
      std::cout << ")\n";
    } else if (*bf) {
      const PoseGraph g = load_graph(bf_in);
      CostKind kind;
      if (bf_cost == "l2") kind = CostKind::l2;
      else if (bf_cost == "l1") kind = CostKind::l1;
      else if (bf_cost == "huber") kind = CostKind::huber;
      else throw std::invalid_argument("brute-force: cost must be l2, l1 or huber");
      const BruteForceResult res = rotation_grid_search(g, kind, bf_res);
      nlohmann::json j;
      j["optimum"] = res.optimum;
      j["angles"] = res.angles;
      j["evaluations"] = res.evaluations;
      const std::string text = j.dump(2);
      if (bf_out.empty()) {
        std::cout << text << "\n";
      } else {
        std::ofstream out(bf_out);
        out << text << "\n";
        std::cout << "wrote " << bf_out << "\n";
      }
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
