#pragma once

#include <cstdint>
#include <vector>

#include "rpgo/pose_graph.hpp"

namespace rpgo {

struct EdgeResidualNorms {
  double r_t = 0.0;  // ||R_i^T (t_j - t_i) - tbar||_2, meters
  double r_R = 0.0;  // ||R_i^T R_j - Rbar||_F, unitless
};

std::vector<EdgeResidualNorms> residuals(const PoseGraph& g, const std::vector<Pose2>& poses);

// Predicted outlier iff r_t >= eta_t OR r_R >= eta_R (eta_R in Frobenius units).
std::vector<bool> classify(const std::vector<EdgeResidualNorms>& res, double eta_t,
                           double eta_R_frobenius);

// Angular threshold (paper units, [0, pi]) to Frobenius: 2 sqrt(2) sin(eta/2).
double angular_to_frobenius(double eta_angle);

struct PrPoint {
  double eta_t = 0.0;        // meters
  double eta_R = 0.0;        // radians (paper's sweep axis)
  double precision = 1.0;    // 1 when nothing is predicted
  double recall = 0.0;
  int true_positives = 0;
  int false_positives = 0;
};

struct PrSweep {
  std::vector<PrPoint> joint;       // eta_t and eta_R swept together
  std::vector<PrPoint> trans_only;  // eta_R pinned at its max grid value
  std::vector<PrPoint> rot_only;    // eta_t pinned at its max grid value
  bool recall_defined = true;       // false when the scenario has no outliers
};

// Default grid: `grid` log-spaced eta_t in (0, 50] m and linear eta_R in
// (0, pi]; joint diagonal plus the two independent sweeps.
PrSweep pr_sweep(const std::vector<EdgeResidualNorms>& res,
                 const std::vector<std::uint8_t>& labels, int grid = 100);

// Trapezoidal area under precision(recall), points sorted by recall.
double pr_area(const std::vector<PrPoint>& points);

}  // namespace rpgo
