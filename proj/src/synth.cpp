#include "rpgo/synth.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace rpgo {

const char* topology_name(Topology t) {
  switch (t) {
    case Topology::erdos_renyi: return "erdos_renyi";
    case Topology::geometric: return "geometric";
    case Topology::grid: return "grid";
  }
  return "?";
}

Topology topology_from_name(const std::string& name) {
  if (name == "erdos_renyi") return Topology::erdos_renyi;
  if (name == "geometric") return Topology::geometric;
  if (name == "grid") return Topology::grid;
  throw std::invalid_argument("unknown topology '" + name + "'");
}

double ScenarioConfig::effective_w_t() const {
  if (w_t > 0.0) return w_t;
  return sigma_t > 0.0 ? 1.0 / (3.0 * sigma_t) : 1.0;
}

double ScenarioConfig::effective_w_r() const {
  if (w_r > 0.0) return w_r;
  return sigma_r > 0.0 ? 1.0 / (3.0 * std::sqrt(2.0) * sigma_r) : 1.0;
}

std::pair<int, int> ScenarioConfig::grid_shape() const {
  if (rows > 0 && cols > 0) return {rows, cols};
  // near-square factorization of n
  int best_r = 1;
  for (int r = 1; r * r <= n; ++r) {
    if (n % r == 0) best_r = r;
  }
  return {best_r, n / best_r};
}

void ScenarioConfig::check() const {
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (env_size <= 0.0) throw std::invalid_argument("config: env_size must be > 0");
  if (sigma_t < 0.0 || sigma_r < 0.0) throw std::invalid_argument("config: sigmas must be >= 0");
  if (p_out < 0.0 || p_out > 1.0) throw std::invalid_argument("config: p_out must be in [0,1]");
  if (topology == Topology::erdos_renyi && (p <= 0.0 || p > 1.0)) {
    throw std::invalid_argument("config: p must be in (0,1]");
  }
  if (topology == Topology::geometric && radius < 0.0) {
    throw std::invalid_argument("config: radius must be >= 0");
  }
  if (topology == Topology::grid) {
    auto [r, c] = grid_shape();
    if (r * c != n) throw std::invalid_argument("config: rows*cols must equal n");
  }
}

// Grid node ids run along the serpentine odometric chain, so consecutive ids
// are physically adjacent; id k sits at row k / cols, column k % cols on even
// rows and mirrored on odd rows.
static int grid_node_id(int r, int c, int cols) {
  return r * cols + (r % 2 == 0 ? c : cols - 1 - c);
}

std::vector<Pose2> sample_ground_truth(const ScenarioConfig& cfg, RngStream& rng) {
  std::vector<Pose2> gt(cfg.n);
  if (cfg.topology == Topology::grid) {
    auto [rows, cols] = cfg.grid_shape();
    const double step = cfg.env_size / std::max({rows - 1, cols - 1, 1});
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        gt[grid_node_id(r, c, cols)].translation = Vec2(c * step, r * step);
      }
    }
  } else {
    for (auto& p : gt) {
      p.translation = Vec2(rng.uniform(0.0, cfg.env_size), rng.uniform(0.0, cfg.env_size));
    }
  }
  for (auto& p : gt) {
    // uniform over (-pi, pi]
    p.rotation = rot_from_angle(kPi - rng.uniform(0.0, 2.0 * kPi));
  }
  return gt;
}

std::vector<std::pair<int, int>> build_topology(const ScenarioConfig& cfg,
                                                const std::vector<Pose2>& gt, RngStream& rng) {
  std::vector<std::pair<int, int>> edges;
  switch (cfg.topology) {
    case Topology::erdos_renyi:
      for (int i = 0; i < cfg.n; ++i) {
        for (int j = i + 1; j < cfg.n; ++j) {
          if (rng.bernoulli(cfg.p)) edges.push_back({i, j});
        }
      }
      break;
    case Topology::geometric: {
      const double r = cfg.effective_radius();
      for (int i = 0; i < cfg.n; ++i) {
        for (int j = i + 1; j < cfg.n; ++j) {
          if ((gt[i].translation - gt[j].translation).norm() < r) edges.push_back({i, j});
        }
      }
      break;
    }
    case Topology::grid: {
      auto [rows, cols] = cfg.grid_shape();
      // node ids follow the serpentine chain, so the odometric edges are
      // exactly the consecutive-id pairs
      std::vector<std::vector<char>> have(cfg.n, std::vector<char>(cfg.n, 0));
      for (int k = 0; k + 1 < cfg.n; ++k) {
        edges.push_back({k, k + 1});
        have[k][k + 1] = have[k + 1][k] = 1;
      }
      // remaining 4-neighbor lattice closures
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          const int a = grid_node_id(r, c, cols);
          if (c + 1 < cols) {
            const int b = grid_node_id(r, c + 1, cols);
            if (!have[a][b]) {
              edges.push_back({std::min(a, b), std::max(a, b)});
              have[a][b] = have[b][a] = 1;
            }
          }
          if (r + 1 < rows) {
            const int b = grid_node_id(r + 1, c, cols);
            if (!have[a][b]) {
              edges.push_back({std::min(a, b), std::max(a, b)});
              have[a][b] = have[b][a] = 1;
            }
          }
        }
      }
      break;
    }
  }
  (void)rng;
  return edges;
}

PoseGraph synthesize_measurements(const std::vector<Pose2>& gt,
                                  const std::vector<std::pair<int, int>>& edges,
                                  const ScenarioConfig& cfg, RngStream& rng) {
  PoseGraph g;
  g.n = cfg.n;
  g.ground_truth = gt;
  const double w_t = cfg.effective_w_t();
  const double w_r = cfg.effective_w_r();
  for (auto [i, j] : edges) {
    const Pose2 rel = relative_pose(gt[i], gt[j]);
    const bool outlier = rng.bernoulli(cfg.p_out);
    Vec2 t_noise;
    double r_noise;
    if (outlier) {
      const double q = cfg.env_size / 4.0;
      t_noise = Vec2(rng.uniform(-q, q), rng.uniform(-q, q));
      r_noise = rng.uniform(-kPi, kPi);
    } else {
      t_noise = Vec2(rng.normal(0.0, cfg.sigma_t), rng.normal(0.0, cfg.sigma_t));
      r_noise = rng.normal(0.0, cfg.sigma_r);
    }
    MeasurementEdge e;
    e.from = i;
    e.to = j;
    e.rel_translation = rel.translation + t_noise;
    e.rel_rotation = rel.rotation * rot_from_angle(r_noise);
    e.w_t = w_t;
    e.w_R = w_r;
    g.edges.push_back(e);
    g.outlier_labels.push_back(outlier ? 1 : 0);
  }
  return g;
}

PoseGraph generate_scenario(const ScenarioConfig& cfg) {
  cfg.check();
  RngStream rng(cfg.seed);
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    // positions are redrawn together with the edges (matters for geometric)
    std::vector<Pose2> gt = sample_ground_truth(cfg, rng);
    std::vector<std::pair<int, int>> edges = build_topology(cfg, gt, rng);
    PoseGraph probe;
    probe.n = cfg.n;
    for (auto [i, j] : edges) {
      MeasurementEdge e;
      e.from = i;
      e.to = j;
      probe.edges.push_back(e);
    }
    if (!is_connected(probe)) continue;
    return synthesize_measurements(gt, edges, cfg, rng);
  }
  std::ostringstream msg;
  msg << "generate_scenario: no connected graph after " << cfg.max_retries
      << " attempts (config: " << write_scenario_config(cfg) << ")";
  throw std::runtime_error(msg.str());
}

ScenarioConfig parse_scenario_config(std::istream& in) {
  ScenarioConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = true;
      for (char ch : line) {
        if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
      }
      if (blank) continue;
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "n") cfg.n = std::stoi(val);
      else if (key == "topology") cfg.topology = topology_from_name(val);
      else if (key == "p") cfg.p = std::stod(val);
      else if (key == "radius") cfg.radius = std::stod(val);
      else if (key == "rows") cfg.rows = std::stoi(val);
      else if (key == "cols") cfg.cols = std::stoi(val);
      else if (key == "env_size") cfg.env_size = std::stod(val);
      else if (key == "sigma_t") cfg.sigma_t = std::stod(val);
      else if (key == "sigma_r") cfg.sigma_r = std::stod(val);
      else if (key == "p_out") cfg.p_out = std::stod(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "w_t") cfg.w_t = std::stod(val);
      else if (key == "w_r") cfg.w_r = std::stod(val);
      else if (key == "max_retries") cfg.max_retries = std::stoi(val);
      else throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad value for " + key);
    }
  }
  return cfg;
}

std::string write_scenario_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "n = " << cfg.n << "\n";
  out << "topology = " << topology_name(cfg.topology) << "\n";
  if (cfg.topology == Topology::erdos_renyi) out << "p = " << cfg.p << "\n";
  if (cfg.topology == Topology::geometric) out << "radius = " << cfg.radius << "\n";
  if (cfg.topology == Topology::grid) {
    auto [r, c] = cfg.grid_shape();
    out << "rows = " << r << "\n" << "cols = " << c << "\n";
  }
  out << "env_size = " << cfg.env_size << "\n";
  out << "sigma_t = " << cfg.sigma_t << "\n";
  out << "sigma_r = " << cfg.sigma_r << "\n";
  out << "p_out = " << cfg.p_out << "\n";
  out << "seed = " << cfg.seed << "\n";
  if (cfg.w_t > 0.0) out << "w_t = " << cfg.w_t << "\n";
  if (cfg.w_r > 0.0) out << "w_r = " << cfg.w_r << "\n";
  return out.str();
}

}  // namespace rpgo
