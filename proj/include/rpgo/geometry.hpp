#pragma once

#include <Eigen/Dense>

namespace rpgo {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;

// Wrap an angle to (-pi, pi].
double normalize_angle(double theta);

// Planar rotation. Invariants: R*R^T = I and det(R) = +1, both within 1e-12.
class Rotation2 {
 public:
  Rotation2() : m_(Mat2::Identity()) {}

  // Validates the invariants; throws std::invalid_argument on violation.
  static Rotation2 from_matrix(const Mat2& m);

  const Mat2& matrix() const { return m_; }
  double angle() const;

  Rotation2 inverse() const;
  Rotation2 operator*(const Rotation2& o) const;
  Vec2 operator*(const Vec2& v) const { return m_ * v; }

  static bool is_valid(const Mat2& m, double tol = 1e-12);

 private:
  struct Unchecked {};
  Rotation2(const Mat2& m, Unchecked) : m_(m) {}
  Mat2 m_;

  friend Rotation2 rot_from_angle(double);
  friend Rotation2 project_to_so2(const Mat2&, bool*);
};

struct Pose2 {
  Rotation2 rotation;
  Vec2 translation = Vec2::Zero();
};

// R(theta) = [[cos, -sin], [sin, cos]]; rejects non-finite input.
Rotation2 rot_from_angle(double theta);

// Angle in (-pi, pi] such that rot_from_angle(angle) reproduces R.
double angle_from_rot(const Rotation2& r);

// Frobenius-nearest rotation to an arbitrary finite 2x2 matrix (SVD with
// determinant correction). When both singular values coincide and det(M) < 0
// the minimizer is non-unique; the canonical decomposition is returned and
// *degenerate is set when provided.
Rotation2 project_to_so2(const Mat2& m, bool* degenerate = nullptr);

// ||Ra - Rb||_F = 2*sqrt(2)*|sin((alpha-beta)/2)|.
double frobenius_rot_distance(const Rotation2& a, const Rotation2& b);

// Relative pose of j expressed in frame i: (R_i^T R_j, R_i^T (t_j - t_i)).
Pose2 relative_pose(const Pose2& xi, const Pose2& xj);

}  // namespace rpgo
