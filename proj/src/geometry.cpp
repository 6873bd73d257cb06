#include "rpgo/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace rpgo {

double normalize_angle(double theta) {
  double a = std::fmod(theta, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

bool Rotation2::is_valid(const Mat2& m, double tol) {
  if (!m.allFinite()) return false;
  const Mat2 gram = m * m.transpose();
  if ((gram - Mat2::Identity()).lpNorm<Eigen::Infinity>() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

Rotation2 Rotation2::from_matrix(const Mat2& m) {
  if (!is_valid(m)) {
    throw std::invalid_argument("Rotation2: matrix is not a proper rotation");
  }
  return Rotation2(m, Unchecked{});
}

double Rotation2::angle() const { return angle_from_rot(*this); }

Rotation2 Rotation2::inverse() const { return Rotation2(m_.transpose(), Unchecked{}); }

Rotation2 Rotation2::operator*(const Rotation2& o) const {
  Mat2 p = m_ * o.m_;
  // Re-orthonormalize to keep long products from drifting.
  const double c = 0.5 * (p(0, 0) + p(1, 1));
  const double s = 0.5 * (p(1, 0) - p(0, 1));
  const double norm = std::hypot(c, s);
  Mat2 q;
  q << c / norm, -s / norm, s / norm, c / norm;
  return Rotation2(q, Unchecked{});
}

Rotation2 rot_from_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("rot_from_angle: non-finite angle");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 m;
  m << c, -s, s, c;
  return Rotation2(m, Rotation2::Unchecked{});
}

double angle_from_rot(const Rotation2& r) {
  const Mat2& m = r.matrix();
  double a = std::atan2(m(1, 0), m(0, 0));
  if (a <= -kPi) a = kPi;  // atan2 may return -pi; domain is (-pi, pi]
  return a;
}

Rotation2 project_to_so2(const Mat2& m, bool* degenerate) {
  if (!m.allFinite()) {
    throw std::invalid_argument("project_to_so2: non-finite input");
  }
  Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat2& u = svd.matrixU();
  const Mat2& v = svd.matrixV();
  const double det_uv = (u * v.transpose()).determinant();
  Mat2 d = Mat2::Identity();
  d(1, 1) = det_uv > 0 ? 1.0 : -1.0;  // flip the smallest singular value's factor
  if (degenerate) {
    const auto& sv = svd.singularValues();
    *degenerate = det_uv < 0 && (sv(0) - sv(1)) <= 1e-12 * (sv(0) + 1.0);
  }
  Mat2 rm = u * d * v.transpose();
  // Snap to an exact rotation through the angle parametrization.
  return rot_from_angle(std::atan2(rm(1, 0), rm(0, 0)));
}

double frobenius_rot_distance(const Rotation2& a, const Rotation2& b) {
  return (a.matrix() - b.matrix()).norm();
}

Pose2 relative_pose(const Pose2& xi, const Pose2& xj) {
  Pose2 rel;
  rel.rotation = xi.rotation.inverse() * xj.rotation;
  rel.translation = xi.rotation.matrix().transpose() * (xj.translation - xi.translation);
  return rel;
}

}  // namespace rpgo
