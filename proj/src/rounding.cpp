#include "rpgo/rounding.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rpgo {

Rank2Factor rank2_factor(const Eigen::MatrixXd& x_hat) {
  const int d = static_cast<int>(x_hat.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (x_hat + x_hat.transpose()));
  const Eigen::VectorXd& lam = eig.eigenvalues();
  Rank2Factor f;
  f.lambda1 = lam[d - 1];
  f.lambda2 = lam[d - 2];
  f.degenerate = !(f.lambda2 > 0.0);
  f.z.resize(2, d);
  f.z.row(0) = std::sqrt(std::max(f.lambda1, 0.0)) * eig.eigenvectors().col(d - 1).transpose();
  f.z.row(1) = std::sqrt(std::max(f.lambda2, 0.0)) * eig.eigenvectors().col(d - 2).transpose();
  return f;
}

std::vector<Rotation2> round_rotations(const Rank2Factor& factor, int n) {
  if (factor.z.cols() < 2 * n) {
    throw std::invalid_argument("round_rotations: factor too small");
  }
  Eigen::Matrix<double, 2, Eigen::Dynamic> z = factor.z;
  int negative = 0;
  for (int i = 0; i < n; ++i) {
    if (z.block<2, 2>(0, 2 * i).determinant() < 0.0) ++negative;
  }
  if (2 * negative > n) z.row(1) *= -1.0;
  std::vector<Rotation2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.push_back(project_to_so2(z.block<2, 2>(0, 2 * i)));
  }
  return out;
}

std::vector<Vec2> round_translations(const Eigen::MatrixXd& x_rt,
                                     const std::vector<Rotation2>& rotations) {
  const int n = static_cast<int>(rotations.size());
  if (x_rt.rows() != 2 * n || x_rt.cols() != n) {
    throw std::invalid_argument("round_translations: X^Rt must be 2n x n");
  }
  std::vector<Vec2> out(n, Vec2::Zero());
  for (int j = 0; j < n; ++j) {
    Vec2 acc = Vec2::Zero();
    for (int i = 0; i < n; ++i) {
      acc += rotations[i].matrix() * x_rt.block<2, 1>(2 * i, j);
    }
    out[j] = acc / static_cast<double>(n);
  }
  return out;
}

double stable_rank(const Eigen::MatrixXd& m) {
  const double fro2 = m.squaredNorm();
  if (!(fro2 > 0.0)) throw std::invalid_argument("stable_rank: zero matrix");
  const double spec = m.operatorNorm();  // largest singular value
  return fro2 / (spec * spec);
}

int numeric_rank(const Eigen::VectorXd& eigenvalues, double eps) {
  if (eigenvalues.size() == 0) return 0;
  const double lmax = eigenvalues.maxCoeff();
  if (!(lmax > 0.0)) return 0;
  int count = 0;
  for (int i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] > eps * lmax) ++count;
  }
  return count;
}

RoundedSolution diagnose(const SolveReport& report, const Eigen::MatrixXd& x,
                         const Rank2Factor& factor, const std::vector<Rotation2>& rotations,
                         const std::vector<Vec2>& translations, const PoseGraph& g, CostKind kind,
                         bool rotation_only) {
  const int n = g.n;
  RoundedSolution sol;
  sol.rotations = rotations;
  sol.translations = translations;
  sol.relaxed_cost = report.objective;
  if (rotation_only) {
    sol.rounded_cost = eval_rotation_cost(kind, g, rotations);
  } else {
    std::vector<Pose2> poses(n);
    for (int i = 0; i < n; ++i) {
      poses[i].rotation = rotations[i];
      poses[i].translation = translations[i];
    }
    sol.rounded_cost = eval_cost(kind, g, poses);
  }
  sol.subopt_gap_bound = sol.rounded_cost - sol.relaxed_cost;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (x + x.transpose()),
                                                     Eigen::EigenvaluesOnly);
  sol.numeric_rank = numeric_rank(eig.eigenvalues());
  sol.stable_rank = stable_rank(x.topLeftCorner(2 * n, 2 * n));

  // Tightness: rank-2 solution whose factor blocks already are rotations
  // (up to the repaired reflection), with a vanishing gap bound.
  bool blocks_ok = true;
  Eigen::Matrix<double, 2, Eigen::Dynamic> z = factor.z;
  int negative = 0;
  for (int i = 0; i < n; ++i) {
    if (z.block<2, 2>(0, 2 * i).determinant() < 0.0) ++negative;
  }
  if (2 * negative > n) z.row(1) *= -1.0;
  for (int i = 0; i < n && blocks_ok; ++i) {
    const Mat2 b = z.block<2, 2>(0, 2 * i);
    blocks_ok = (b.transpose() * b - Mat2::Identity()).norm() <= kEpsSO2;
  }
  const double eps_gap = 1e-5 * (1.0 + std::abs(sol.relaxed_cost));
  sol.tight = (sol.numeric_rank == 2) && blocks_ok && (sol.subopt_gap_bound < eps_gap);
  return sol;
}

}  // namespace rpgo
