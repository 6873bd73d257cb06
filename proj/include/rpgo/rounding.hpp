#pragma once

#include <vector>

#include "rpgo/costs.hpp"
#include "rpgo/pose_graph.hpp"
#include "rpgo/sdp.hpp"

namespace rpgo {

// Diagnostic thresholds. The rank threshold is relative to the largest
// eigenvalue; 0.05 sits above the noise-floor eigenvalues the relaxations
// produce at realistic measurement noise and below genuine rank growth.
inline constexpr double kEpsRank = 0.05;
inline constexpr double kEpsSO2 = 1e-4;

struct Rank2Factor {
  Eigen::Matrix<double, 2, Eigen::Dynamic> z;  // [sqrt(l1) u1, sqrt(l2) u2]^T
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool degenerate = false;  // lambda2 <= 0
};

// Best rank-2 PSD approximation of a (near-)PSD matrix via its top-2 eigenpairs.
Rank2Factor rank2_factor(const Eigen::MatrixXd& x_hat);

// SO(2)-project the first n 2x2 blocks of Z. If most raw blocks have negative
// determinant the whole factor is reflected first (diag(1,-1) * Z preserves
// Z^T Z), repairing the O(2) gauge.
std::vector<Rotation2> round_rotations(const Rank2Factor& factor, int n);

// t_hat = (1/n) * Rhat * X^Rt (exact when X = Z^T Z with orthogonal blocks).
std::vector<Vec2> round_translations(const Eigen::MatrixXd& x_rt,
                                     const std::vector<Rotation2>& rotations);

// ||M||_F^2 / ||M||_2^2; rejects the zero matrix.
double stable_rank(const Eigen::MatrixXd& m);

// #{lambda_i > eps * lambda_max} over a (near-)PSD spectrum.
int numeric_rank(const Eigen::VectorXd& eigenvalues, double eps = kEpsRank);

struct RoundedSolution {
  std::vector<Rotation2> rotations;
  std::vector<Vec2> translations;
  double rounded_cost = 0.0;
  double relaxed_cost = 0.0;
  double subopt_gap_bound = 0.0;  // rounded - relaxed, Eq. 24/25 direction
  bool tight = false;
  double stable_rank = 0.0;       // of the X^RR block
  int numeric_rank = 0;           // of the solved matrix
};

// Assembles the a-posteriori diagnostics. `x` is the matrix the poses were
// rounded from (canonicalized for one-stage problems); rotation_only selects
// the Prop.-11 path where the functional is f_R and translations are ignored.
RoundedSolution diagnose(const SolveReport& report, const Eigen::MatrixXd& x,
                         const Rank2Factor& factor, const std::vector<Rotation2>& rotations,
                         const std::vector<Vec2>& translations, const PoseGraph& g, CostKind kind,
                         bool rotation_only);

}  // namespace rpgo
