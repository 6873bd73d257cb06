#include "rpgo/bruteforce.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rpgo {

BruteForceResult rotation_grid_search(const PoseGraph& g, CostKind cost, double resolution_deg) {
  if (cost == CostKind::quadratic) {
    throw std::invalid_argument("rotation_grid_search: robust kinds only");
  }
  if (g.n < 1 || g.n > 6) {
    throw std::invalid_argument("rotation_grid_search: exhaustive search supports n in [1, 6]");
  }
  const int bins = std::max(4, static_cast<int>(std::lround(360.0 / resolution_deg)));
  const double step = 2.0 * kPi / bins;

  // cost_table[e][k]: edge cost when theta_to - theta_from = -pi + k*step
  std::vector<std::vector<double>> table(g.edges.size(), std::vector<double>(bins));
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    const double tbar = edge.rel_rotation.angle();
    for (int k = 0; k < bins; ++k) {
      const double delta = -kPi + k * step;
      double value = 0.0;
      switch (cost) {
        case CostKind::l2: {
          const double fro = 2.0 * std::sqrt(2.0) * std::abs(std::sin(0.5 * (delta - tbar)));
          value = (edge.w_R / std::sqrt(2.0)) * fro;
          break;
        }
        case CostKind::l1: {
          const double l1 = 2.0 * std::abs(std::cos(delta) - std::cos(tbar)) +
                            2.0 * std::abs(std::sin(delta) - std::sin(tbar));
          value = 0.5 * edge.w_R * l1;
          break;
        }
        case CostKind::huber: {
          const double fro = 2.0 * std::sqrt(2.0) * std::abs(std::sin(0.5 * (delta - tbar)));
          value = huber(edge.w_R * fro);
          break;
        }
        default:
          break;
      }
      table[e][k] = value;
    }
  }

  // Edges grouped by their larger endpoint so each assignment level adds the
  // edges it completes.
  std::vector<std::vector<int>> by_level(g.n);
  for (int e = 0; e < g.m(); ++e) {
    by_level[std::max(g.edges[e].from, g.edges[e].to)].push_back(e);
  }

  BruteForceResult best;
  best.optimum = std::numeric_limits<double>::infinity();
  best.angles.assign(g.n, 0.0);

  std::vector<int> assign(g.n, 0);  // bin index per node; node 0 pinned to angle 0
  const int zero_bin = static_cast<int>(std::lround((0.0 + kPi) / step)) % bins;
  assign[0] = zero_bin;

  // depth-first over nodes 1..n-1 with partial-cost pruning
  struct Frame {
    double partial;
    int k;
  };
  std::vector<double> partial_at(g.n, 0.0);
  long long evals = 0;

  auto level_cost = [&](int node) {
    double add = 0.0;
    for (int e : by_level[node]) {
      const auto& edge = g.edges[e];
      const int kf = assign[edge.from], kt = assign[edge.to];
      int diff = kt - kf;
      diff %= bins;
      if (diff < 0) diff += bins;
      // delta = theta_to - theta_from = (kt - kf)*step, folded into [-pi, pi)
      int idx = (diff + zero_bin) % bins;
      add += table[e][idx];
    }
    return add;
  };

  // iterative nested loops
  int node = 1;
  if (g.n == 1) {
    best.optimum = 0.0;
    best.evaluations = 1;
    return best;
  }
  assign[1] = -1;
  while (node >= 1) {
    ++assign[node];
    if (assign[node] >= bins) {
      assign[node] = -1;
      --node;
      continue;
    }
    const double partial = partial_at[node - 1] + level_cost(node);
    if (partial >= best.optimum) continue;  // prune
    if (node == g.n - 1) {
      ++evals;
      best.optimum = partial;
      for (int i = 0; i < g.n; ++i) {
        best.angles[i] = normalize_angle(-kPi + assign[i] * step);
      }
    } else {
      partial_at[node] = partial;
      ++node;
      assign[node] = -1;
    }
  }
  best.evaluations = evals;
  return best;
}

}  // namespace rpgo
