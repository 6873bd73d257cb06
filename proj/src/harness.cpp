#include "rpgo/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rpgo/detect.hpp"

namespace rpgo {

namespace {
const double kNan = std::numeric_limits<double>::quiet_NaN();
}

const char* method_name(Method m) {
  switch (m) {
    case Method::l1_one_stage: return "l1-1stage";
    case Method::l1_two_stage: return "l1-2stage";
    case Method::l2_one_stage: return "l2-1stage";
    case Method::l2_two_stage: return "l2-2stage";
    case Method::huber_one_stage: return "huber-1stage";
    case Method::huber_two_stage: return "huber-2stage";
    case Method::gauss_newton: return "gn";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  for (Method m : all_methods()) {
    if (name == method_name(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::vector<Method> all_methods() {
  return {Method::l1_one_stage,    Method::l1_two_stage, Method::l2_one_stage,
          Method::l2_two_stage,    Method::huber_one_stage, Method::huber_two_stage,
          Method::gauss_newton};
}

bool method_is_two_stage(Method m) {
  return m == Method::l1_two_stage || m == Method::l2_two_stage || m == Method::huber_two_stage;
}

bool method_is_one_stage(Method m) {
  return m == Method::l1_one_stage || m == Method::l2_one_stage || m == Method::huber_one_stage;
}

CostKind method_cost(Method m) {
  switch (m) {
    case Method::l1_one_stage:
    case Method::l1_two_stage: return CostKind::l1;
    case Method::l2_one_stage:
    case Method::l2_two_stage: return CostKind::l2;
    case Method::huber_one_stage:
    case Method::huber_two_stage: return CostKind::huber;
    case Method::gauss_newton: return CostKind::quadratic;
  }
  return CostKind::quadratic;
}

AlignTransform align_gauge(const std::vector<Pose2>& estimate,
                           const std::vector<Pose2>& reference) {
  if (estimate.size() != reference.size()) {
    throw std::invalid_argument("align_gauge: size mismatch");
  }
  const int n = static_cast<int>(estimate.size());
  AlignTransform g;
  if (n == 0) return g;
  Vec2 pm = Vec2::Zero(), qm = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    pm += estimate[i].translation;
    qm += reference[i].translation;
  }
  pm /= n;
  qm /= n;
  Mat2 h = Mat2::Zero();
  for (int i = 0; i < n; ++i) {
    h += (reference[i].translation - qm) * (estimate[i].translation - pm).transpose();
  }
  if (h.norm() > 1e-12) {
    g.rotation = project_to_so2(h);
  }  // else: rotation undetermined, keep identity
  g.translation = qm - g.rotation.matrix() * pm;
  return g;
}

std::vector<Pose2> apply_transform(const AlignTransform& g, const std::vector<Pose2>& poses) {
  std::vector<Pose2> out;
  out.reserve(poses.size());
  for (const auto& p : poses) {
    Pose2 q;
    q.rotation = g.rotation * p.rotation;
    q.translation = g.rotation.matrix() * p.translation + g.translation;
    out.push_back(q);
  }
  return out;
}

std::pair<double, double> error_metrics(const std::vector<Pose2>& aligned,
                                        const std::vector<Pose2>& reference) {
  if (aligned.size() != reference.size() || aligned.empty()) {
    throw std::invalid_argument("error_metrics: size mismatch");
  }
  double terr = 0.0, rerr = 0.0;
  for (size_t i = 0; i < aligned.size(); ++i) {
    terr += (aligned[i].translation - reference[i].translation).norm();
    const Rotation2 drot = aligned[i].rotation.inverse() * reference[i].rotation;
    rerr += std::abs(drot.angle());
  }
  const double n = static_cast<double>(aligned.size());
  return {terr / n, rerr / n};
}

MethodRecord run_method(const PoseGraph& g, Method m, const SolveOptions& opts) {
  MethodRecord rec;
  rec.method = m;
  rec.trans_err = rec.rot_err = kNan;
  rec.stable_rank = rec.relaxed_cost = rec.rounded_cost = rec.gap_bound = kNan;
  rec.detect_aupr = kNan;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (m == Method::gauss_newton) {
      const GNResult gn = gauss_newton(g, odometry_init(g));
      rec.poses = gn.poses;
      rec.rounded_cost = gn.cost;
      rec.converged = gn.converged;
      rec.solved = true;
    } else {
      const CostKind cost = method_cost(m);
      if (method_is_one_stage(m)) {
        const ConicProblem problem = build_onestage(cost, g);
        SolveReport report = solve(problem, opts);
        // rotations come from the canonicalized matrix (clean rank structure);
        // translations average the solver's raw X^Rt block, whose
        // slice-invisible gauge modes cancel to a global shift
        const Eigen::MatrixXd canon = canonicalize_onestage(report.X_hat, g.n);
        const Rank2Factor factor = rank2_factor(canon);
        const auto rotations = round_rotations(factor, g.n);
        const auto translations =
            round_translations(report.X_hat.topRightCorner(2 * g.n, g.n), rotations);
        const RoundedSolution diag =
            diagnose(report, canon, factor, rotations, translations, g, cost, false);
        rec.converged = report.converged;
        rec.relaxed_cost = diag.relaxed_cost;
        rec.rounded_cost = diag.rounded_cost;
        rec.gap_bound = diag.subopt_gap_bound;
        rec.tight = diag.tight;
        rec.stable_rank = diag.stable_rank;
        rec.numeric_rank = diag.numeric_rank;
        rec.poses.resize(g.n);
        for (int i = 0; i < g.n; ++i) {
          rec.poses[i] = {rotations[i], translations[i]};
        }
      } else {
        const ConicProblem problem = build_rotation_stage(cost, g);
        SolveReport report = solve(problem, opts);
        const Rank2Factor factor = rank2_factor(report.X_hat);
        const auto rotations = round_rotations(factor, g.n);
        const TranslationSolution tsol = solve_translations(cost, g, rotations, opts);
        const RoundedSolution diag = diagnose(report, report.X_hat, factor, rotations,
                                              tsol.translations, g, cost, true);
        rec.converged = report.converged && tsol.report.converged;
        rec.relaxed_cost = diag.relaxed_cost;
        rec.rounded_cost = diag.rounded_cost;
        rec.gap_bound = diag.subopt_gap_bound;
        rec.tight = diag.tight;
        rec.stable_rank = diag.stable_rank;
        rec.numeric_rank = diag.numeric_rank;
        rec.poses.resize(g.n);
        for (int i = 0; i < g.n; ++i) {
          rec.poses[i] = {rotations[i], tsol.translations[i]};
        }
      }
      rec.solved = true;
    }
  } catch (const std::exception& ex) {
    rec.error = ex.what();
    rec.solved = false;
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

TrialRecord run_trial(const ScenarioConfig& cfg, const std::vector<Method>& methods,
                      std::uint64_t seed, const SolveOptions& opts) {
  TrialRecord trial;
  trial.config = cfg;
  trial.config.seed = seed;
  trial.seed = seed;
  const PoseGraph g = generate_scenario(trial.config);
  for (Method m : methods) {
    MethodRecord rec = run_method(g, m, opts);
    if (rec.solved && g.has_ground_truth()) {
      const AlignTransform align = align_gauge(rec.poses, g.ground_truth);
      const auto aligned = apply_transform(align, rec.poses);
      std::tie(rec.trans_err, rec.rot_err) = error_metrics(aligned, g.ground_truth);
      if (g.has_labels()) {
        const auto res = residuals(g, rec.poses);
        const PrSweep sweep = pr_sweep(res, g.outlier_labels);
        if (sweep.recall_defined) rec.detect_aupr = pr_area(sweep.joint);
      }
    }
    trial.methods.push_back(std::move(rec));
  }
  return trial;
}

std::string TrialRecord::digest() const {
  std::ostringstream out;
  out << write_scenario_config(config) << "|seed=" << seed;
  char buf[64];
  for (const auto& r : methods) {
    out << "|" << method_name(r.method) << ":";
    const double vals[] = {r.trans_err, r.rot_err,      r.stable_rank, double(r.numeric_rank),
                           r.relaxed_cost, r.rounded_cost, r.gap_bound,   r.detect_aupr};
    for (double v : vals) {
      std::snprintf(buf, sizeof(buf), "%.17g,", v);
      out << buf;
    }
    out << (r.tight ? 1 : 0) << "," << (r.converged ? 1 : 0) << "," << (r.solved ? 1 : 0);
  }
  return out.str();
}

ExperimentPlan ExperimentPlan::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentPlan plan;
  for (const auto& js : j.at("scenarios")) {
    ScenarioConfig base;
    base.n = js.value("n", 20);
    base.topology = topology_from_name(js.value("topology", std::string("erdos_renyi")));
    base.p = js.value("p", 0.5);
    base.radius = js.value("radius", 0.0);
    base.rows = js.value("rows", 0);
    base.cols = js.value("cols", 0);
    base.env_size = js.value("env_size", 10.0);
    base.sigma_t = js.value("sigma_t", 0.1);
    base.sigma_r = js.value("sigma_r", 0.01);
    base.w_t = js.value("w_t", 0.0);
    base.w_r = js.value("w_r", 0.0);
    std::vector<double> pouts;
    if (js.count("p_out_grid")) {
      for (const auto& v : js["p_out_grid"]) pouts.push_back(v.get<double>());
    } else {
      pouts.push_back(js.value("p_out", 0.0));
    }
    for (double po : pouts) {
      ScenarioConfig cell = base;
      cell.p_out = po;
      plan.cells.push_back(cell);
    }
  }
  if (j.count("methods")) {
    for (const auto& jm : j["methods"]) plan.methods.push_back(method_from_name(jm.get<std::string>()));
  } else {
    plan.methods = all_methods();
  }
  plan.runs = j.value("runs", 30);
  plan.master_seed = j.value("master_seed", std::uint64_t{1});
  plan.jobs = j.value("jobs", 1);
  if (plan.cells.empty()) throw std::invalid_argument("plan: empty scenario grid");
  if (plan.runs < 1) throw std::invalid_argument("plan: runs must be >= 1");
  return plan;
}

std::string ExperimentPlan::echo_json() const {
  nlohmann::json j;
  j["runs"] = runs;
  j["master_seed"] = master_seed;
  j["jobs"] = jobs;
  j["methods"] = nlohmann::json::array();
  for (Method m : methods) j["methods"].push_back(method_name(m));
  j["cells"] = nlohmann::json::array();
  for (const auto& c : cells) {
    j["cells"].push_back({{"n", c.n},
                          {"topology", topology_name(c.topology)},
                          {"p", c.p},
                          {"radius", c.effective_radius()},
                          {"env_size", c.env_size},
                          {"sigma_t", c.sigma_t},
                          {"sigma_r", c.sigma_r},
                          {"p_out", c.p_out},
                          {"w_t", c.effective_w_t()},
                          {"w_R", c.effective_w_r()}});
  }
  return j.dump(2);
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  const int total = static_cast<int>(plan.cells.size()) * plan.runs;
  ExperimentResult result;
  result.trials.resize(total);
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int k = next.fetch_add(1);
      if (k >= total) break;
      const int cell = k / plan.runs;
      const std::uint64_t seed = RngStream::splitmix64(plan.master_seed + 0x9E3779B97F4A7C15ULL *
                                                                              (std::uint64_t(k) + 1));
      result.trials[k] = run_trial(plan.cells[cell], plan.methods, seed, plan.solver);
    }
  };
  const int jobs = std::max(1, plan.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

namespace {

void csv_row(std::ostream& out, const ScenarioConfig& cfg, const std::string& method,
             const std::string& run, const std::string& seed, double te, double re, double sr,
             double nr, double rc, double dc, double gb, double tight, double wall) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%d,%g,%s,%s,%s,%.10g,%.10g,%.6g,%.6g,%.10g,%.10g,%.6g,%g,%.3f\n",
                topology_name(cfg.topology), cfg.n, cfg.p_out, method.c_str(), run.c_str(),
                seed.c_str(), te, re, sr, nr, rc, dc, gb, tight, wall);
  out << buf;
}

}  // namespace

void write_results_csv(std::ostream& out, const ExperimentPlan& plan,
                       const ExperimentResult& result) {
  out << "topology,n,p_out,method,run,seed,trans_err,rot_err,stable_rank,numeric_rank,"
         "relaxed_cost,rounded_cost,gap_bound,tight,wall_ms\n";
  const int runs = plan.runs;
  for (size_t cell = 0; cell < plan.cells.size(); ++cell) {
    for (int run = 0; run < runs; ++run) {
      const TrialRecord& trial = result.trials[cell * runs + run];
      for (const auto& r : trial.methods) {
        csv_row(out, trial.config, method_name(r.method), std::to_string(run),
                std::to_string(trial.seed), r.trans_err, r.rot_err, r.stable_rank,
                r.numeric_rank, r.relaxed_cost, r.rounded_cost, r.gap_bound, r.tight ? 1 : 0,
                r.wall_ms);
      }
    }
    // aggregate mean rows
    for (size_t mi = 0; mi < plan.methods.size(); ++mi) {
      double te = 0, re = 0, sr = 0, nr = 0, rc = 0, dc = 0, gb = 0, tight = 0, wall = 0;
      for (int run = 0; run < runs; ++run) {
        const auto& r = result.trials[cell * runs + run].methods[mi];
        te += r.trans_err;
        re += r.rot_err;
        sr += r.stable_rank;
        nr += r.numeric_rank;
        rc += r.relaxed_cost;
        dc += r.rounded_cost;
        gb += r.gap_bound;
        tight += r.tight ? 1 : 0;
        wall += r.wall_ms;
      }
      const double k = runs;
      csv_row(out, plan.cells[cell], method_name(plan.methods[mi]), "mean", "-", te / k, re / k,
              sr / k, nr / k, rc / k, dc / k, gb / k, tight / k, wall / k);
    }
  }
}

void write_summary_csv(std::ostream& out, const ExperimentPlan& plan,
                       const ExperimentResult& result) {
  out << "topology,n,p_out,w_t,w_R,method,runs,trans_err_mean,trans_err_std,rot_err_mean,"
         "rot_err_std,stable_rank_mean,numeric_rank_mean,tight_fraction,aupr_mean\n";
  const int runs = plan.runs;
  for (size_t cell = 0; cell < plan.cells.size(); ++cell) {
    const ScenarioConfig& cfg = plan.cells[cell];
    for (size_t mi = 0; mi < plan.methods.size(); ++mi) {
      double te = 0, te2 = 0, re = 0, re2 = 0, sr = 0, nr = 0, tight = 0, aupr = 0;
      int aupr_n = 0;
      for (int run = 0; run < runs; ++run) {
        const auto& r = result.trials[cell * runs + run].methods[mi];
        te += r.trans_err;
        te2 += r.trans_err * r.trans_err;
        re += r.rot_err;
        re2 += r.rot_err * r.rot_err;
        sr += r.stable_rank;
        nr += r.numeric_rank;
        tight += r.tight ? 1 : 0;
        if (std::isfinite(r.detect_aupr)) {
          aupr += r.detect_aupr;
          ++aupr_n;
        }
      }
      const double k = runs;
      const double te_m = te / k, re_m = re / k;
      const double te_s = std::sqrt(std::max(0.0, te2 / k - te_m * te_m));
      const double re_s = std::sqrt(std::max(0.0, re2 / k - re_m * re_m));
      char buf[512];
      std::snprintf(buf, sizeof(buf), "%s,%d,%g,%.6g,%.6g,%s,%d,%.10g,%.6g,%.10g,%.6g,%.6g,%.4g,%.4g,%.6g\n",
                    topology_name(cfg.topology), cfg.n, cfg.p_out, cfg.effective_w_t(),
                    cfg.effective_w_r(), method_name(plan.methods[mi]), runs, te_m, te_s, re_m,
                    re_s, sr / k, nr / k, tight / k, aupr_n ? aupr / aupr_n : kNan);
      out << buf;
    }
  }
}

}  // namespace rpgo
