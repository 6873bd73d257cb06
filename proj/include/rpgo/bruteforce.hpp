#pragma once

#include <vector>

#include "rpgo/costs.hpp"
#include "rpgo/pose_graph.hpp"

namespace rpgo {

struct BruteForceResult {
  double optimum = 0.0;
  std::vector<double> angles;  // per node, theta_0 = 0
  long long evaluations = 0;
};

// Exhaustive grid search of the rotation-only objective f_R over
// (theta_1, ..., theta_{n-1}) with theta_0 = 0 at the given resolution.
// Independent of the relaxation pipeline; costs go through per-edge lookup
// tables over the relative-angle grid, with branch-and-bound pruning.
// Practical up to n = 5 at 1 degree.
BruteForceResult rotation_grid_search(const PoseGraph& g, CostKind cost,
                                      double resolution_deg = 1.0);

}  // namespace rpgo
