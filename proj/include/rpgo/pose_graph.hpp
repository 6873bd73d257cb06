#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rpgo/geometry.hpp"

namespace rpgo {

// Directed relative-pose measurement, expressed in the frame of `from`.
struct MeasurementEdge {
  int from = 0;
  int to = 0;
  Rotation2 rel_rotation;
  Vec2 rel_translation = Vec2::Zero();
  double w_t = 1.0;  // translation weight (sqrt of information)
  double w_R = 1.0;  // rotation weight
};

struct PoseGraph {
  int n = 0;
  std::vector<MeasurementEdge> edges;

  // Optional payloads; empty when absent.
  std::vector<Pose2> ground_truth;
  std::vector<std::uint8_t> outlier_labels;  // per edge, 1 = outlier
  std::vector<Pose2> initial_guess;          // from VERTEX_SE2 records
  std::vector<std::int64_t> original_ids;    // id map when input ids were sparse

  int m() const { return static_cast<int>(edges.size()); }
  bool has_ground_truth() const { return !ground_truth.empty(); }
  bool has_labels() const { return !outlier_labels.empty(); }
};

// Diagnostic check: empty result iff ids are in range, weights are positive
// and finite, from != to, and the undirected graph is connected.
std::vector<std::string> validate(const PoseGraph& g);

bool is_connected(const PoseGraph& g);

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// g2o 2D text format. VERTEX_SE2 lines fill initial_guess; EDGE_SE2
// information matrices must be isotropic and uncoupled (I11 == I22,
// I12 == I13 == I23 == 0 within 1e-9); weights are w = sqrt(information).
PoseGraph parse_g2o(std::istream& in);

// poses.size() must equal g.n; output uses 17 significant digits so a
// parse round-trip is exact to parse precision.
void write_g2o(std::ostream& out, const PoseGraph& g, const std::vector<Pose2>& poses);

// Lossless JSON schema (keeps weights, ground truth and outlier labels).
std::string to_json(const PoseGraph& g);
PoseGraph from_json(const std::string& text);

// Dispatch on extension: .g2o or .json.
PoseGraph load_graph(const std::string& path);
void save_graph_json(const std::string& path, const PoseGraph& g);

}  // namespace rpgo
