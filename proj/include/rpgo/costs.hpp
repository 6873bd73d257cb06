#pragma once

#include <vector>

#include "rpgo/pose_graph.hpp"

namespace rpgo {

enum class CostKind { quadratic, l2, l1, huber };

const char* cost_kind_name(CostKind k);

// h(x) = x^2 for |x| <= 1, 2|x| - 1 otherwise.
double huber(double x);

struct EdgeResidual {
  Vec2 r_t = Vec2::Zero();   // R_i^T (t_j - t_i) - tbar_ij
  Mat2 r_R = Mat2::Zero();   // R_i^T R_j - Rbar_ij
};

EdgeResidual edge_residual(const MeasurementEdge& e, const std::vector<Pose2>& poses);

// Full pose-domain objective:
//   quadratic:  sum w_t^2 ||r_t||_2^2 + (w_R^2 / 2) ||r_R||_F^2
//   l2:         sum w_t ||r_t||_2 + (w_R / sqrt(2)) ||r_R||_F
//   l1:         sum w_t ||r_t||_1 + (w_R / 2) ||r_R||_1   (entrywise)
//   huber:      sum h(w_t ||r_t||_2) + h(w_R ||r_R||_F)
double eval_cost(CostKind kind, const PoseGraph& g, const std::vector<Pose2>& poses);

// Rotation-only functional f_R (l2, l1, huber).
double eval_rotation_cost(CostKind kind, const PoseGraph& g, const std::vector<Rotation2>& rotations);

// Translation functional f_t at fixed rotations (l2, l1, huber).
double eval_translation_cost(CostKind kind, const PoseGraph& g,
                             const std::vector<Rotation2>& rotations,
                             const std::vector<Vec2>& translations);

}  // namespace rpgo
