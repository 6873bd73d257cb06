#pragma once

#include <vector>

#include "rpgo/pose_graph.hpp"

namespace rpgo {

struct GNOptions {
  int max_iters = 100;
  double step_tol = 1e-9;
  double damping = 0.0;  // Levenberg fallback multiplies by 10 on cost increase
};

// Compose poses along a spanning tree rooted at node 0 (identity). Edges
// between consecutive ids (the grid generator's odometric chain) are
// preferred; BFS over the remaining edges fills any gaps.
std::vector<Pose2> odometry_init(const PoseGraph& g);

struct GNResult {
  std::vector<Pose2> poses;
  double cost = 0.0;  // final quadratic cost
  int iterations = 0;
  bool converged = false;
};

// Local minimization of the quadratic objective over (theta_i, t_i) with
// pose 0 fixed. Accepted steps never increase the cost.
GNResult gauss_newton(const PoseGraph& g, const std::vector<Pose2>& init,
                      const GNOptions& opts = {});

}  // namespace rpgo
