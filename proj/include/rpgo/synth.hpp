#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rpgo/pose_graph.hpp"
#include "rpgo/rng.hpp"

namespace rpgo {

enum class Topology { erdos_renyi, geometric, grid };

const char* topology_name(Topology t);
Topology topology_from_name(const std::string& name);

struct ScenarioConfig {
  int n = 20;
  Topology topology = Topology::erdos_renyi;
  double p = 0.5;           // Erdos-Renyi edge probability
  double radius = 0.0;      // geometric radius; 0 selects env_size / 4
  int rows = 0, cols = 0;   // grid shape; 0 x 0 selects a near-square grid for n
  double env_size = 10.0;   // side of the square the poses live in, meters
  double sigma_t = 0.1;
  double sigma_r = 0.01;
  double p_out = 0.0;
  std::uint64_t seed = 0;
  double w_t = 0.0;         // 0: auto, 1 / (3 sigma_t)
  double w_r = 0.0;         // 0: auto, 1 / (3 sqrt(2) sigma_r)
  int max_retries = 1000;   // connectivity resampling cap

  double effective_radius() const { return radius > 0.0 ? radius : env_size / 4.0; }
  double effective_w_t() const;
  double effective_w_r() const;
  std::pair<int, int> grid_shape() const;
  void check() const;  // throws std::invalid_argument on bad fields
};

std::vector<Pose2> sample_ground_truth(const ScenarioConfig& cfg, RngStream& rng);

// Unlabeled edge list over the ground truth (geometric topology needs the
// positions). Grid: serpentine odometric chain first, then lattice closures.
std::vector<std::pair<int, int>> build_topology(const ScenarioConfig& cfg,
                                                const std::vector<Pose2>& gt, RngStream& rng);

PoseGraph synthesize_measurements(const std::vector<Pose2>& gt,
                                  const std::vector<std::pair<int, int>>& edges,
                                  const ScenarioConfig& cfg, RngStream& rng);

// Full pipeline: resample (positions and edges) until connected, then draw
// measurements. Throws std::runtime_error when the retry cap is exceeded.
PoseGraph generate_scenario(const ScenarioConfig& cfg);

// key = value config file round-trip.
ScenarioConfig parse_scenario_config(std::istream& in);
std::string write_scenario_config(const ScenarioConfig& cfg);

}  // namespace rpgo
