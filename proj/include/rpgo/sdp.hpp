#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpgo/geometry.hpp"

namespace rpgo {

// Penalty applied to an affine slice of the variable.
//   l2_norm / frobenius_norm:  w * ||v||_2     (frobenius = l2 on the vectorized block)
//   l1_norm:                   w * ||v||_1
//   huber_of_l2 / huber_of_frobenius:  h(w * ||v||_2), h the unit Huber loss
//   box_interval:              indicator of 0 <= v <= w (w is the upper bound)
enum class PenaltyKind {
  l2_norm,
  l1_norm,
  huber_of_l2,
  huber_of_frobenius,
  frobenius_norm,
  box_interval,
};

// value[k] = sum over entries with comp == k of coeff * x[index], plus offset[k].
// For matrix variables index = row * dim + col.
struct AffineSlice {
  struct Entry {
    int comp;
    int index;
    double coeff;
  };
  std::vector<Entry> entries;
  Eigen::VectorXd offset;

  int size() const { return static_cast<int>(offset.size()); }
};

struct PenaltyTerm {
  PenaltyKind kind = PenaltyKind::l2_norm;
  double weight = 1.0;
  AffineSlice slice;
};

struct FixedEntry {
  int index = 0;
  double value = 0.0;
};

// minimize  sum_k penalty_k(slice_k(x))
// s.t.      mat(x) PSD            (when psd_cone; x flattens a dim x dim matrix)
//           x[fixed] = values     (identity diagonal blocks, gauge anchors)
struct ConicProblem {
  int dim = 0;
  bool psd_cone = true;
  std::vector<PenaltyTerm> terms;
  std::vector<FixedEntry> fixed_entries;
  // Optional per-row/column variable scaling used internally by the solver to
  // equilibrate the consensus geometry (ones = no scaling). The reported
  // solution is always in the unscaled variable.
  Eigen::VectorXd col_scale;

  int vars() const { return psd_cone ? dim * dim : dim; }
  int flat(int r, int c) const { return r * dim + c; }

  // Fixes the 2x2 block at (r0, c0) and its transpose mirror.
  void fix_block2(int r0, int c0, const Mat2& value);
  void fix_entry_sym(int r, int c, double value);

  double eval(const Eigen::VectorXd& x) const;
  double eval(const Eigen::MatrixXd& X) const;
};

struct SolveOptions {
  double eps_abs = 1e-8;
  double eps_rel = 1e-9;
  int max_iter = 50000;
  double rho = 1.0;
  double over_relaxation = 1.0;
  bool adapt_rho = true;
  int log_every = 0;          // > 0: append to log_path every k iterations
  std::string log_path;       // CSV: iter,objective,primal_res,dual_res
};

struct SolveReport {
  Eigen::MatrixXd X_hat;            // dim x dim (psd) or dim x 1 (vector problem)
  double objective = 0.0;           // problem cost evaluated at the returned point
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  Eigen::VectorXd eigenvalues;      // ascending; empty for vector problems
  bool converged = false;
  std::vector<double> residual_history;  // max(primal, dual) per iteration

  Eigen::VectorXd x_flat() const;
};

// Euclidean projection onto the PSD cone (eigenvalue clamping). Rejects
// inputs that are asymmetric beyond 1e-9.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s);

// Proximal operator of the penalties above: argmin_u penalty(u) + ||u-v||^2/(2t).
Eigen::VectorXd prox(PenaltyKind kind, double weight, double step, const Eigen::VectorXd& v);

double eval_penalty(PenaltyKind kind, double weight, const Eigen::VectorXd& v);

SolveReport solve(const ConicProblem& problem, const SolveOptions& opts = {});

}  // namespace rpgo
