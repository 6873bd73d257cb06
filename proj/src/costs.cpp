#include "rpgo/costs.hpp"

#include <cmath>
#include <stdexcept>

namespace rpgo {

const char* cost_kind_name(CostKind k) {
  switch (k) {
    case CostKind::quadratic: return "quadratic";
    case CostKind::l2: return "l2";
    case CostKind::l1: return "l1";
    case CostKind::huber: return "huber";
  }
  return "?";
}

double huber(double x) {
  const double a = std::abs(x);
  return a <= 1.0 ? a * a : 2.0 * a - 1.0;
}

EdgeResidual edge_residual(const MeasurementEdge& e, const std::vector<Pose2>& poses) {
  const Pose2& xi = poses[e.from];
  const Pose2& xj = poses[e.to];
  EdgeResidual r;
  r.r_t = xi.rotation.matrix().transpose() * (xj.translation - xi.translation) - e.rel_translation;
  r.r_R = xi.rotation.matrix().transpose() * xj.rotation.matrix() - e.rel_rotation.matrix();
  return r;
}

namespace {

const double kSqrt2 = std::sqrt(2.0);

double rotation_term(CostKind kind, double w_R, const Mat2& r_R) {
  switch (kind) {
    case CostKind::quadratic: return 0.5 * w_R * w_R * r_R.squaredNorm();
    case CostKind::l2: return (w_R / kSqrt2) * r_R.norm();
    case CostKind::l1: return 0.5 * w_R * r_R.cwiseAbs().sum();
    case CostKind::huber: return huber(w_R * r_R.norm());
  }
  return 0.0;
}

double translation_term(CostKind kind, double w_t, const Vec2& r_t) {
  switch (kind) {
    case CostKind::quadratic: return w_t * w_t * r_t.squaredNorm();
    case CostKind::l2: return w_t * r_t.norm();
    case CostKind::l1: return w_t * r_t.lpNorm<1>();
    case CostKind::huber: return huber(w_t * r_t.norm());
  }
  return 0.0;
}

}  // namespace

double eval_cost(CostKind kind, const PoseGraph& g, const std::vector<Pose2>& poses) {
  double total = 0.0;
  for (const auto& e : g.edges) {
    const EdgeResidual r = edge_residual(e, poses);
    total += translation_term(kind, e.w_t, r.r_t) + rotation_term(kind, e.w_R, r.r_R);
  }
  return total;
}

double eval_rotation_cost(CostKind kind, const PoseGraph& g,
                          const std::vector<Rotation2>& rotations) {
  if (kind == CostKind::quadratic) {
    throw std::invalid_argument("eval_rotation_cost: robust kinds only");
  }
  double total = 0.0;
  for (const auto& e : g.edges) {
    const Mat2 r_R = rotations[e.from].matrix().transpose() * rotations[e.to].matrix() -
                     e.rel_rotation.matrix();
    total += rotation_term(kind, e.w_R, r_R);
  }
  return total;
}

double eval_translation_cost(CostKind kind, const PoseGraph& g,
                             const std::vector<Rotation2>& rotations,
                             const std::vector<Vec2>& translations) {
  if (kind == CostKind::quadratic) {
    throw std::invalid_argument("eval_translation_cost: robust kinds only");
  }
  double total = 0.0;
  for (const auto& e : g.edges) {
    const Vec2 r_t = rotations[e.from].matrix().transpose() *
                         (translations[e.to] - translations[e.from]) -
                     e.rel_translation;
    total += translation_term(kind, e.w_t, r_t);
  }
  return total;
}

}  // namespace rpgo
