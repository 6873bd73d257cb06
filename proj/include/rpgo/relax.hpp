#pragma once

#include <vector>

#include "rpgo/costs.hpp"
#include "rpgo/pose_graph.hpp"
#include "rpgo/sdp.hpp"

namespace rpgo {

// Block coordinates of the lifted variable X = Z^T Z: rotations occupy
// rows/columns [0, 2n), translations [2n, 3n).
struct LiftedIndex {
  int n = 0;

  int dim() const { return 3 * n; }
  int rr_row(int i, int r) const { return 2 * i + r; }      // [X^RR]_ij entry rows
  int rt_col(int j) const { return 2 * n + j; }             // [X^Rt]_.j column
  int tt(int i) const { return 2 * n + i; }                 // [X^tt] diagonal coordinate
};

enum class Stages { one_stage, two_stage };

struct MethodSpec {
  Stages stages = Stages::two_stage;
  CostKind cost = CostKind::huber;  // l2, l1 or huber
};

// Lifted relaxation over X (3n x 3n): per-edge translation and rotation
// penalty slices, identity rotation diagonal blocks, PSD cone, the gauge
// anchor [X^tt]_00 = 0, and per-node upper bounds on the translation Gram
// diagonal (see build notes in the implementation).
ConicProblem build_onestage(CostKind cost, const PoseGraph& g);

// Rotation-stage relaxation over X^RR (2n x 2n).
ConicProblem build_rotation_stage(CostKind cost, const PoseGraph& g);

// Replace the translation Gram block of a solved one-stage matrix by its
// minimal PSD completion B^T (X^RR)^+ B. Objective, penalty slices and fixed
// blocks are untouched; of the (always degenerate) optimal set this selects
// the minimum-rank representative, which is what rounding and the rank
// diagnostics should see.
Eigen::MatrixXd canonicalize_onestage(const Eigen::MatrixXd& x_hat, int n);

struct TranslationSolution {
  std::vector<Vec2> translations;
  SolveReport report;
};

// Stage 2: minimize f_t over translations with rotations fixed, gauge t_0 = 0.
// Solved by the same splitting engine without a PSD cone.
TranslationSolution solve_translations(CostKind cost, const PoseGraph& g,
                                       const std::vector<Rotation2>& rotations,
                                       const SolveOptions& opts = {});

}  // namespace rpgo
