#include "rpgo/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rpgo/costs.hpp"

namespace rpgo {

std::vector<EdgeResidualNorms> residuals(const PoseGraph& g, const std::vector<Pose2>& poses) {
  if (static_cast<int>(poses.size()) != g.n) {
    throw std::invalid_argument("residuals: poses.size() != n");
  }
  std::vector<EdgeResidualNorms> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    const EdgeResidual r = edge_residual(e, poses);
    out.push_back({r.r_t.norm(), r.r_R.norm()});
  }
  return out;
}

std::vector<bool> classify(const std::vector<EdgeResidualNorms>& res, double eta_t,
                           double eta_R_frobenius) {
  if (eta_t < 0.0 || eta_R_frobenius < 0.0) {
    throw std::invalid_argument("classify: thresholds must be >= 0");
  }
  std::vector<bool> out(res.size());
  for (size_t k = 0; k < res.size(); ++k) {
    out[k] = res[k].r_t >= eta_t || res[k].r_R >= eta_R_frobenius;
  }
  return out;
}

double angular_to_frobenius(double eta_angle) {
  return 2.0 * std::sqrt(2.0) * std::sin(0.5 * eta_angle);
}

namespace {

PrPoint evaluate_point(const std::vector<EdgeResidualNorms>& res,
                       const std::vector<std::uint8_t>& labels, double eta_t, double eta_R_angle,
                       int n_out) {
  PrPoint p;
  p.eta_t = eta_t;
  p.eta_R = eta_R_angle;
  const double eta_R_f = angular_to_frobenius(eta_R_angle);
  int tp = 0, fp = 0;
  for (size_t k = 0; k < res.size(); ++k) {
    const bool predicted = res[k].r_t >= eta_t || res[k].r_R >= eta_R_f;
    if (!predicted) continue;
    if (labels[k]) {
      ++tp;
    } else {
      ++fp;
    }
  }
  p.true_positives = tp;
  p.false_positives = fp;
  p.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
  p.recall = n_out == 0 ? 0.0 : static_cast<double>(tp) / n_out;
  return p;
}

}  // namespace

PrSweep pr_sweep(const std::vector<EdgeResidualNorms>& res,
                 const std::vector<std::uint8_t>& labels, int grid) {
  if (labels.size() != res.size()) {
    throw std::invalid_argument("pr_sweep: labels.size() != residuals.size()");
  }
  if (grid < 2) throw std::invalid_argument("pr_sweep: grid must be >= 2");
  int n_out = 0;
  for (auto b : labels) n_out += b ? 1 : 0;

  PrSweep sweep;
  sweep.recall_defined = n_out > 0;

  // log-spaced eta_t in (0, 50], linear eta_R in (0, pi]
  const double t_max = 50.0, t_min = 1e-3;
  std::vector<double> etas_t(grid), etas_r(grid);
  for (int k = 0; k < grid; ++k) {
    etas_t[k] = t_min * std::pow(t_max / t_min, static_cast<double>(k) / (grid - 1));
    etas_r[k] = kPi * static_cast<double>(k + 1) / grid;
  }
  for (int k = 0; k < grid; ++k) {
    sweep.joint.push_back(evaluate_point(res, labels, etas_t[k], etas_r[k], n_out));
    sweep.trans_only.push_back(evaluate_point(res, labels, etas_t[k], etas_r[grid - 1], n_out));
    sweep.rot_only.push_back(evaluate_point(res, labels, etas_t[grid - 1], etas_r[k], n_out));
  }
  return sweep;
}

double pr_area(const std::vector<PrPoint>& points) {
  std::vector<std::pair<double, double>> rp;
  rp.reserve(points.size());
  for (const auto& p : points) rp.push_back({p.recall, p.precision});
  std::sort(rp.begin(), rp.end());
  double area = 0.0;
  double prev_r = 0.0, prev_p = 1.0;
  bool first = true;
  for (const auto& [r, p] : rp) {
    if (first) {
      prev_r = r;
      prev_p = p;
      first = false;
      continue;
    }
    area += 0.5 * (p + prev_p) * (r - prev_r);
    prev_r = r;
    prev_p = p;
  }
  return area;
}

}  // namespace rpgo
