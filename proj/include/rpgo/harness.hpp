#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rpgo/baselines.hpp"
#include "rpgo/pose_graph.hpp"
#include "rpgo/relax.hpp"
#include "rpgo/rounding.hpp"
#include "rpgo/synth.hpp"

namespace rpgo {

enum class Method {
  l1_one_stage,
  l1_two_stage,
  l2_one_stage,
  l2_two_stage,
  huber_one_stage,
  huber_two_stage,
  gauss_newton,
};

const char* method_name(Method m);           // CLI spelling, e.g. "huber-2stage"
Method method_from_name(const std::string&);
std::vector<Method> all_methods();
bool method_is_two_stage(Method m);
bool method_is_one_stage(Method m);
CostKind method_cost(Method m);  // gauss_newton -> quadratic

struct AlignTransform {
  Rotation2 rotation;
  Vec2 translation = Vec2::Zero();
};

// Rigid transform minimizing sum ||G t_i + c - t_i^ref||^2 (Procrustes
// without scale). Coincident/underdetermined point sets fall back to the
// identity rotation.
AlignTransform align_gauge(const std::vector<Pose2>& estimate,
                           const std::vector<Pose2>& reference);
std::vector<Pose2> apply_transform(const AlignTransform& g, const std::vector<Pose2>& poses);

// (mean translation error, mean absolute rotation error) vs the reference.
std::pair<double, double> error_metrics(const std::vector<Pose2>& aligned,
                                        const std::vector<Pose2>& reference);

struct MethodRecord {
  Method method = Method::gauss_newton;
  bool solved = false;       // pipeline ran to completion
  bool converged = false;    // solver convergence (GN: step tolerance reached)
  double trans_err = 0.0;
  double rot_err = 0.0;
  double stable_rank = 0.0;  // of X^RR (NaN for gauss_newton)
  int numeric_rank = 0;
  double relaxed_cost = 0.0;
  double rounded_cost = 0.0;
  double gap_bound = 0.0;
  bool tight = false;
  double wall_ms = 0.0;
  double detect_aupr = 0.0;  // joint-sweep PR area (NaN without labels)
  std::string error;         // failure note, empty on success
  std::vector<Pose2> poses;
};

// Solve one method on a graph; estimation-only (no ground-truth access).
MethodRecord run_method(const PoseGraph& g, Method m, const SolveOptions& opts = {});

struct TrialRecord {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::vector<MethodRecord> methods;

  // Deterministic serialization for reproducibility checks; wall-clock
  // fields excluded.
  std::string digest() const;
};

TrialRecord run_trial(const ScenarioConfig& cfg, const std::vector<Method>& methods,
                      std::uint64_t seed, const SolveOptions& opts = {});

struct ExperimentPlan {
  std::vector<ScenarioConfig> cells;  // fully-specified scenario per cell
  std::vector<Method> methods;
  int runs = 30;
  std::uint64_t master_seed = 1;
  int jobs = 1;
  SolveOptions solver;

  static ExperimentPlan from_json(const std::string& text);
  std::string echo_json() const;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;  // cell-major: cell * runs + run
};

ExperimentResult run_experiment(const ExperimentPlan& plan);

// Pinned schema: topology,n,p_out,method,run,seed,trans_err,rot_err,
// stable_rank,numeric_rank,relaxed_cost,rounded_cost,gap_bound,tight,wall_ms.
// Per-run rows followed by one aggregate row per (cell, method) with
// run = "mean".
void write_results_csv(std::ostream& out, const ExperimentPlan& plan,
                       const ExperimentResult& result);

// Mean/stddev per (cell, method) plus the weights used.
void write_summary_csv(std::ostream& out, const ExperimentPlan& plan,
                       const ExperimentResult& result);

}  // namespace rpgo
