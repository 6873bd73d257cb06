#include "rpgo/baselines.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

#include <Eigen/Dense>

#include "rpgo/costs.hpp"

namespace rpgo {

std::vector<Pose2> odometry_init(const PoseGraph& g) {
  if (!is_connected(g)) {
    throw std::runtime_error("odometry_init: graph is disconnected");
  }
  // forward/backward adjacency with edge indices
  std::vector<std::vector<std::pair<int, int>>> adj(g.n);  // (neighbor, edge idx)
  for (int k = 0; k < g.m(); ++k) {
    adj[g.edges[k].from].push_back({g.edges[k].to, k});
    adj[g.edges[k].to].push_back({g.edges[k].from, k});
  }
  std::vector<Pose2> poses(g.n);
  std::vector<char> placed(g.n, 0);
  placed[0] = 1;

  auto compose = [&](int from_node, int to_node, int edge_idx) {
    const MeasurementEdge& e = g.edges[edge_idx];
    const Pose2& base = poses[from_node];
    Pose2 out;
    if (e.from == from_node) {
      out.rotation = base.rotation * e.rel_rotation;
      out.translation = base.translation + base.rotation.matrix() * e.rel_translation;
    } else {  // traverse against the edge direction
      out.rotation = base.rotation * e.rel_rotation.inverse();
      out.translation =
          base.translation - out.rotation.matrix() * e.rel_translation;
    }
    poses[to_node] = out;
    placed[to_node] = 1;
  };

  // Odometric chain first: consecutive-id edges, as the grid generator emits.
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (int k = 0; k < g.m(); ++k) {
      const auto& e = g.edges[k];
      if (std::abs(e.to - e.from) != 1) continue;
      if (placed[e.from] && !placed[e.to]) {
        compose(e.from, e.to, k);
        progressed = true;
      } else if (placed[e.to] && !placed[e.from]) {
        compose(e.to, e.from, k);
        progressed = true;
      }
    }
  }
  // BFS over everything else.
  std::queue<int> frontier;
  for (int i = 0; i < g.n; ++i) {
    if (placed[i]) frontier.push(i);
  }
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (auto [v, k] : adj[u]) {
      if (!placed[v]) {
        compose(u, v, k);
        frontier.push(v);
      }
    }
  }
  return poses;
}

namespace {

struct State {
  Eigen::VectorXd theta;  // n
  Eigen::MatrixXd t;      // 2 x n
};

double quad_cost(const PoseGraph& g, const State& s) {
  double total = 0.0;
  for (const auto& e : g.edges) {
    const Mat2 ri = rot_from_angle(s.theta[e.from]).matrix();
    const Vec2 rt = ri.transpose() * (s.t.col(e.to) - s.t.col(e.from)) - e.rel_translation;
    const double delta = s.theta[e.to] - s.theta[e.from] - e.rel_rotation.angle();
    const double fr = 2.0 * e.w_R * std::sin(0.5 * delta);
    total += e.w_t * e.w_t * rt.squaredNorm() + fr * fr;
  }
  return total;
}

}  // namespace

GNResult gauss_newton(const PoseGraph& g, const std::vector<Pose2>& init, const GNOptions& opts) {
  if (static_cast<int>(init.size()) != g.n) {
    throw std::invalid_argument("gauss_newton: init.size() != n");
  }
  const int n = g.n;
  const int nv = 3 * (n - 1);  // pose 0 is the gauge
  State s;
  s.theta.resize(n);
  s.t.resize(2, n);
  for (int i = 0; i < n; ++i) {
    s.theta[i] = init[i].rotation.angle();
    s.t.col(i) = init[i].translation;
  }

  GNResult result;
  result.converged = false;
  double cost = quad_cost(g, s);
  double lambda = opts.damping;

  Eigen::MatrixXd jtj(nv, nv);
  Eigen::VectorXd jtf(nv);
  Mat2 skew;
  skew << 0.0, -1.0, 1.0, 0.0;

  int it = 0;
  for (; it < opts.max_iters; ++it) {
    jtj.setZero();
    jtf.setZero();
    auto var = [&](int node) { return 3 * (node - 1); };  // (tx, ty, theta)
    for (const auto& e : g.edges) {
      const int i = e.from, j = e.to;
      const Mat2 rit = rot_from_angle(s.theta[i]).matrix().transpose();
      const Vec2 dt = s.t.col(j) - s.t.col(i);
      const Vec2 ft = e.w_t * (rit * dt - e.rel_translation);
      const Mat2 jt_tj = e.w_t * rit;                    // d ft / d t_j
      const Vec2 jt_thi = -e.w_t * (rit * (skew * dt));  // d ft / d theta_i
      const double delta = s.theta[j] - s.theta[i] - e.rel_rotation.angle();
      const double fr = 2.0 * e.w_R * std::sin(0.5 * delta);
      const double jr = e.w_R * std::cos(0.5 * delta);   // d fr / d theta_j

      // Jacobian columns for this edge: up to 6 variables (t_i, theta_i, t_j, theta_j).
      int idx[6];
      Eigen::Matrix<double, 3, 6> jac;  // rows: ft_x, ft_y, fr
      jac.setZero();
      int ncols = 0;
      if (i != 0) {
        idx[ncols] = var(i) + 0;
        jac.col(ncols) << -jt_tj(0, 0), -jt_tj(1, 0), 0.0;
        ++ncols;
        idx[ncols] = var(i) + 1;
        jac.col(ncols) << -jt_tj(0, 1), -jt_tj(1, 1), 0.0;
        ++ncols;
        idx[ncols] = var(i) + 2;
        jac.col(ncols) << jt_thi(0), jt_thi(1), -jr;
        ++ncols;
      }
      if (j != 0) {
        idx[ncols] = var(j) + 0;
        jac.col(ncols) << jt_tj(0, 0), jt_tj(1, 0), 0.0;
        ++ncols;
        idx[ncols] = var(j) + 1;
        jac.col(ncols) << jt_tj(0, 1), jt_tj(1, 1), 0.0;
        ++ncols;
        idx[ncols] = var(j) + 2;
        jac.col(ncols) << 0.0, 0.0, jr;
        ++ncols;
      }
      const Eigen::Vector3d f(ft.x(), ft.y(), fr);
      for (int a = 0; a < ncols; ++a) {
        jtf[idx[a]] += jac.col(a).dot(f);
        for (int b = 0; b < ncols; ++b) {
          jtj(idx[a], idx[b]) += jac.col(a).dot(jac.col(b));
        }
      }
    }

    // Levenberg fallback: retry the step with escalating damping on cost increase.
    bool accepted = false;
    double trial_lambda = lambda;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd sys = jtj;
      if (trial_lambda > 0.0) sys.diagonal().array() += trial_lambda;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(sys);
      if (ldlt.info() != Eigen::Success) {
        trial_lambda = trial_lambda > 0.0 ? trial_lambda * 10.0 : 1e-6;
        continue;
      }
      const Eigen::VectorXd step = ldlt.solve(-jtf);
      if (!step.allFinite()) {
        trial_lambda = trial_lambda > 0.0 ? trial_lambda * 10.0 : 1e-6;
        continue;
      }
      State cand = s;
      for (int node = 1; node < n; ++node) {
        cand.t(0, node) += step[3 * (node - 1)];
        cand.t(1, node) += step[3 * (node - 1) + 1];
        cand.theta[node] = normalize_angle(cand.theta[node] + step[3 * (node - 1) + 2]);
      }
      const double cand_cost = quad_cost(g, cand);
      if (cand_cost <= cost + 1e-15 * (1.0 + cost)) {
        s = cand;
        cost = cand_cost;
        lambda = trial_lambda;
        accepted = true;
        if (step.norm() < opts.step_tol) {
          result.converged = true;
        }
        break;
      }
      trial_lambda = trial_lambda > 0.0 ? trial_lambda * 10.0 : 1e-6;
    }
    if (!accepted) {
      // no improving step found at any damping; report where we stopped
      break;
    }
    if (result.converged) {
      ++it;
      break;
    }
  }

  result.iterations = it;
  result.cost = cost;
  result.poses.resize(n);
  for (int i = 0; i < n; ++i) {
    result.poses[i].rotation = rot_from_angle(s.theta[i]);
    result.poses[i].translation = s.t.col(i);
  }
  return result;
}

}  // namespace rpgo
