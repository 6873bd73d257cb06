#include "rpgo/relax.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rpgo {

namespace {

const double kSqrt2 = std::sqrt(2.0);

struct RotationPenalty {
  PenaltyKind kind;
  double weight;
};

RotationPenalty rotation_penalty(CostKind cost, double w_R) {
  switch (cost) {
    case CostKind::l2: return {PenaltyKind::frobenius_norm, w_R / kSqrt2};
    case CostKind::l1: return {PenaltyKind::l1_norm, 0.5 * w_R};
    case CostKind::huber: return {PenaltyKind::huber_of_frobenius, w_R};
    default: throw std::invalid_argument("rotation penalty: robust kinds only");
  }
}

RotationPenalty translation_penalty(CostKind cost, double w_t) {
  switch (cost) {
    case CostKind::l2: return {PenaltyKind::l2_norm, w_t};
    case CostKind::l1: return {PenaltyKind::l1_norm, w_t};
    case CostKind::huber: return {PenaltyKind::huber_of_l2, w_t};
    default: throw std::invalid_argument("translation penalty: robust kinds only");
  }
}

// Dijkstra over measured edge lengths from the anchor node. ||t_j - t_0|| of
// any pose assignment reachable by composing measured edges is bounded by
// these sums (triangle inequality through the composed rigid motions).
std::vector<double> anchored_path_bounds(const PoseGraph& g) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.n);
  for (const auto& e : g.edges) {
    const double len = e.rel_translation.norm();
    adj[e.from].push_back({e.to, len});
    adj[e.to].push_back({e.from, len});
  }
  std::vector<double> dist(g.n, std::numeric_limits<double>::infinity());
  dist[0] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, 0});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.push({dist[v], v});
      }
    }
  }
  return dist;
}

double translation_column_scale(const PoseGraph& g) {
  double sum2 = 0.0;
  for (const auto& e : g.edges) sum2 += e.rel_translation.squaredNorm();
  const double rms = g.edges.empty() ? 1.0 : std::sqrt(sum2 / g.edges.size());
  return std::max(1.0, rms);
}

}  // namespace

ConicProblem build_onestage(CostKind cost, const PoseGraph& g) {
  const LiftedIndex li{g.n};
  ConicProblem p;
  p.dim = li.dim();
  p.psd_cone = true;

  for (const auto& e : g.edges) {
    const int i = e.from, j = e.to;
    // translation slice: [X^Rt]_ij - [X^Rt]_ii - tbar_ij
    PenaltyTerm t;
    const auto tp = translation_penalty(cost, e.w_t);
    t.kind = tp.kind;
    t.weight = tp.weight;
    t.slice.offset = -e.rel_translation;
    for (int a = 0; a < 2; ++a) {
      t.slice.entries.push_back({a, p.flat(li.rr_row(i, a), li.rt_col(j)), 1.0});
      t.slice.entries.push_back({a, p.flat(li.rr_row(i, a), li.rt_col(i)), -1.0});
    }
    p.terms.push_back(std::move(t));

    // rotation slice: [X^RR]_ij - Rbar_ij
    PenaltyTerm r;
    const auto rp = rotation_penalty(cost, e.w_R);
    r.kind = rp.kind;
    r.weight = rp.weight;
    r.slice.offset = Eigen::VectorXd(4);
    for (int rr = 0; rr < 2; ++rr) {
      for (int cc = 0; cc < 2; ++cc) {
        r.slice.offset[2 * rr + cc] = -e.rel_rotation.matrix()(rr, cc);
        r.slice.entries.push_back({2 * rr + cc, p.flat(li.rr_row(i, rr), li.rr_row(j, cc)), 1.0});
      }
    }
    p.terms.push_back(std::move(r));
  }

  for (int i = 0; i < g.n; ++i) p.fix_block2(2 * i, 2 * i, Mat2::Identity());
  p.fix_entry_sym(li.tt(0), li.tt(0), 0.0);  // gauge anchor, encodes t_0 = 0

  // The cost never reads X^tt, so its diagonal is free to inflate under the
  // PSD completion; bounding it keeps the optimal face compact and the
  // optimum attained. Any pose assignment whose translations compose from the
  // measured edges satisfies these bounds with 2x headroom.
  const auto bounds = anchored_path_bounds(g);
  for (int j = 1; j < g.n; ++j) {
    if (!std::isfinite(bounds[j])) continue;  // validate() reports disconnection
    PenaltyTerm cap;
    cap.kind = PenaltyKind::box_interval;
    cap.weight = (2.0 * bounds[j]) * (2.0 * bounds[j]) + 1.0;
    cap.slice.offset = Eigen::VectorXd::Zero(1);
    cap.slice.entries.push_back({0, p.flat(li.tt(j), li.tt(j)), 1.0});
    p.terms.push_back(std::move(cap));
  }

  const double ts = translation_column_scale(g);
  p.col_scale = Eigen::VectorXd::Ones(p.dim);
  for (int j = 0; j < g.n; ++j) p.col_scale[li.tt(j)] = 1.0 / ts;
  return p;
}

ConicProblem build_rotation_stage(CostKind cost, const PoseGraph& g) {
  ConicProblem p;
  p.dim = 2 * g.n;
  p.psd_cone = true;
  for (const auto& e : g.edges) {
    const int i = e.from, j = e.to;
    PenaltyTerm r;
    const auto rp = rotation_penalty(cost, e.w_R);
    r.kind = rp.kind;
    r.weight = rp.weight;
    r.slice.offset = Eigen::VectorXd(4);
    for (int rr = 0; rr < 2; ++rr) {
      for (int cc = 0; cc < 2; ++cc) {
        r.slice.offset[2 * rr + cc] = -e.rel_rotation.matrix()(rr, cc);
        r.slice.entries.push_back({2 * rr + cc, p.flat(2 * i + rr, 2 * j + cc), 1.0});
      }
    }
    p.terms.push_back(std::move(r));
  }
  for (int i = 0; i < g.n; ++i) p.fix_block2(2 * i, 2 * i, Mat2::Identity());
  return p;
}

Eigen::MatrixXd canonicalize_onestage(const Eigen::MatrixXd& x_hat, int n) {
  const int d = 3 * n;
  if (x_hat.rows() != d || x_hat.cols() != d) {
    throw std::invalid_argument("canonicalize_onestage: dimension mismatch");
  }
  const Eigen::MatrixXd a = x_hat.topLeftCorner(2 * n, 2 * n);
  const Eigen::MatrixXd b = x_hat.topRightCorner(2 * n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double lmax = std::max(lam[2 * n - 1], 0.0);
  // Directions below the cutoff are solver noise, not structure; X^Rt mass
  // on them is discarded too, otherwise the pseudo-inverse amplifies it into
  // spurious translation-Gram energy.
  const double cutoff = 1e-4 * std::max(lmax, 1e-300);
  const Eigen::MatrixXd bt = eig.eigenvectors().transpose() * b;  // 2n x n
  Eigen::MatrixXd b_clean = Eigen::MatrixXd::Zero(2 * n, n);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < 2 * n; ++k) {
    if (lam[k] > cutoff) {
      b_clean.noalias() += eig.eigenvectors().col(k) * bt.row(k);
      c.noalias() += bt.row(k).transpose() * bt.row(k) / lam[k];
    }
  }
  c.row(0).setZero();  // anchor row/column stays pinned
  c.col(0).setZero();
  Eigen::MatrixXd out = x_hat;
  out.topRightCorner(2 * n, n) = b_clean;
  out.bottomLeftCorner(n, 2 * n) = b_clean.transpose();
  out.bottomRightCorner(n, n) = c;
  return out;
}

TranslationSolution solve_translations(CostKind cost, const PoseGraph& g,
                                       const std::vector<Rotation2>& rotations,
                                       const SolveOptions& opts) {
  if (static_cast<int>(rotations.size()) != g.n) {
    throw std::invalid_argument("solve_translations: rotations.size() != n");
  }
  ConicProblem p;
  p.dim = 2 * g.n;
  p.psd_cone = false;
  for (const auto& e : g.edges) {
    // slice = Rhat_i^T (t_j - t_i) - tbar_ij
    const Mat2 rt = rotations[e.from].matrix().transpose();
    PenaltyTerm t;
    const auto tp = translation_penalty(cost, e.w_t);
    t.kind = tp.kind;
    t.weight = tp.weight;
    t.slice.offset = -e.rel_translation;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        t.slice.entries.push_back({a, 2 * e.to + b, rt(a, b)});
        t.slice.entries.push_back({a, 2 * e.from + b, -rt(a, b)});
      }
    }
    p.terms.push_back(std::move(t));
  }
  p.fixed_entries.push_back({0, 0.0});
  p.fixed_entries.push_back({1, 0.0});

  TranslationSolution sol;
  sol.report = solve(p, opts);
  sol.translations.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    sol.translations[i] = Vec2(sol.report.X_hat(2 * i, 0), sol.report.X_hat(2 * i + 1, 0));
  }
  return sol;
}

}  // namespace rpgo
