#include "rpgo/pose_graph.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace rpgo {

namespace {

// Union-find over node ids.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool is_connected(const PoseGraph& g) {
  if (g.n <= 1) return true;
  Dsu dsu(g.n);
  for (const auto& e : g.edges) {
    if (e.from >= 0 && e.from < g.n && e.to >= 0 && e.to < g.n) {
      dsu.unite(e.from, e.to);
    }
  }
  const int root = dsu.find(0);
  for (int i = 1; i < g.n; ++i) {
    if (dsu.find(i) != root) return false;
  }
  return true;
}

std::vector<std::string> validate(const PoseGraph& g) {
  std::vector<std::string> violations;
  if (g.n <= 0) violations.push_back("graph has no nodes");
  for (size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    std::ostringstream tag;
    tag << "edge " << k << " (" << e.from << "->" << e.to << "): ";
    if (e.from < 0 || e.from >= g.n || e.to < 0 || e.to >= g.n) {
      violations.push_back(tag.str() + "node id out of range");
      continue;
    }
    if (e.from == e.to) violations.push_back(tag.str() + "self loop");
    if (!(e.w_t > 0.0) || !std::isfinite(e.w_t) || !(e.w_R > 0.0) || !std::isfinite(e.w_R)) {
      violations.push_back(tag.str() + "nonpositive or non-finite weight");
    }
    if (!e.rel_translation.allFinite()) {
      violations.push_back(tag.str() + "non-finite translation");
    }
  }
  if (g.n > 1 && !is_connected(g)) {
    Dsu dsu(g.n);
    for (const auto& e : g.edges) {
      if (e.from >= 0 && e.from < g.n && e.to >= 0 && e.to < g.n) dsu.unite(e.from, e.to);
    }
    const int root = dsu.find(0);
    for (int i = 1; i < g.n; ++i) {
      if (dsu.find(i) != root) {
        violations.push_back("disconnected: node " + std::to_string(i));
      }
    }
  }
  return violations;
}

PoseGraph parse_g2o(std::istream& in) {
  PoseGraph g;
  std::map<std::int64_t, int> id_index;
  std::vector<std::int64_t> ids;
  std::vector<Pose2> vertices;
  struct RawEdge {
    std::int64_t i, j;
    double dx, dy, dth;
    double info[6];
    int line;
  };
  std::vector<RawEdge> raw_edges;

  std::string line;
  int line_no = 0;
  bool saw_any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    if (token.empty()) continue;
    saw_any = true;
    if (token == "VERTEX_SE2") {
      std::int64_t id;
      double x, y, th;
      if (!(ss >> id >> x >> y >> th)) {
        throw ParseError("g2o line " + std::to_string(line_no) + ": malformed VERTEX_SE2");
      }
      if (!id_index.count(id)) {
        id_index[id] = static_cast<int>(ids.size());
        ids.push_back(id);
        vertices.emplace_back();
      }
      Pose2& p = vertices[id_index[id]];
      p.translation = Vec2(x, y);
      p.rotation = rot_from_angle(th);
    } else if (token == "EDGE_SE2") {
      RawEdge e{};
      e.line = line_no;
      if (!(ss >> e.i >> e.j >> e.dx >> e.dy >> e.dth >> e.info[0] >> e.info[1] >> e.info[2] >>
            e.info[3] >> e.info[4] >> e.info[5])) {
        throw ParseError("g2o line " + std::to_string(line_no) + ": malformed EDGE_SE2");
      }
      raw_edges.push_back(e);
    } else if (token == "FIX") {
      continue;  // anchoring handled internally
    } else {
      throw ParseError("g2o line " + std::to_string(line_no) + ": unsupported record '" + token +
                       "' (only 2D VERTEX_SE2/EDGE_SE2)");
    }
  }
  if (!saw_any) throw ParseError("g2o: empty stream");

  for (const auto& e : raw_edges) {
    for (std::int64_t id : {e.i, e.j}) {
      if (!id_index.count(id)) {
        id_index[id] = static_cast<int>(ids.size());
        ids.push_back(id);
        vertices.emplace_back();
      }
    }
  }

  g.n = static_cast<int>(ids.size());
  if (g.n == 0) throw ParseError("g2o: no vertices or edges");
  g.initial_guess = vertices;
  // Persist the id map only when ids are not already dense 0..n-1.
  bool dense = true;
  for (int i = 0; i < g.n; ++i) {
    if (ids[i] != i) {
      dense = false;
      break;
    }
  }
  if (!dense) g.original_ids = ids;

  for (const auto& e : raw_edges) {
    const double ixx = e.info[0], ixy = e.info[1], ixt = e.info[2];
    const double iyy = e.info[3], iyt = e.info[4], itt = e.info[5];
    if (std::abs(ixx - iyy) > 1e-9 || std::abs(ixy) > 1e-9) {
      throw ParseError("g2o line " + std::to_string(e.line) +
                       ": anisotropic translation information (Ixx != Iyy or Ixy != 0); this "
                       "toolkit models translation noise as isotropic");
    }
    if (std::abs(ixt) > 1e-9 || std::abs(iyt) > 1e-9) {
      throw ParseError("g2o line " + std::to_string(e.line) +
                       ": translation-rotation information coupling is not supported");
    }
    if (!(ixx > 0.0) || !(itt > 0.0)) {
      throw ParseError("g2o line " + std::to_string(e.line) + ": nonpositive information");
    }
    MeasurementEdge edge;
    edge.from = id_index[e.i];
    edge.to = id_index[e.j];
    edge.rel_translation = Vec2(e.dx, e.dy);
    edge.rel_rotation = rot_from_angle(e.dth);
    edge.w_t = std::sqrt(ixx);
    edge.w_R = std::sqrt(itt);
    g.edges.push_back(edge);
  }
  return g;
}

void write_g2o(std::ostream& out, const PoseGraph& g, const std::vector<Pose2>& poses) {
  if (static_cast<int>(poses.size()) != g.n) {
    throw std::invalid_argument("write_g2o: poses.size() != n");
  }
  auto id_of = [&](int k) -> std::int64_t {
    return g.original_ids.empty() ? k : g.original_ids[k];
  };
  char buf[512];
  for (int i = 0; i < g.n; ++i) {
    std::snprintf(buf, sizeof(buf), "VERTEX_SE2 %lld %.17g %.17g %.17g\n",
                  static_cast<long long>(id_of(i)), poses[i].translation.x(),
                  poses[i].translation.y(), poses[i].rotation.angle());
    out << buf;
  }
  for (const auto& e : g.edges) {
    const double it = e.w_t * e.w_t;
    const double ir = e.w_R * e.w_R;
    std::snprintf(buf, sizeof(buf), "EDGE_SE2 %lld %lld %.17g %.17g %.17g %.17g 0 0 %.17g 0 %.17g\n",
                  static_cast<long long>(id_of(e.from)), static_cast<long long>(id_of(e.to)),
                  e.rel_translation.x(), e.rel_translation.y(), e.rel_rotation.angle(), it, it, ir);
    out << buf;
  }
}

namespace {

nlohmann::json pose_to_json(const Pose2& p) {
  return {{"x", p.translation.x()}, {"y", p.translation.y()}, {"theta", p.rotation.angle()}};
}

Pose2 pose_from_json(const nlohmann::json& j) {
  Pose2 p;
  p.translation = Vec2(j.at("x").get<double>(), j.at("y").get<double>());
  p.rotation = rot_from_angle(j.at("theta").get<double>());
  return p;
}

}  // namespace

std::string to_json(const PoseGraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) {
    j["edges"].push_back({{"from", e.from},
                          {"to", e.to},
                          {"dx", e.rel_translation.x()},
                          {"dy", e.rel_translation.y()},
                          {"dtheta", e.rel_rotation.angle()},
                          {"w_t", e.w_t},
                          {"w_R", e.w_R}});
  }
  if (!g.ground_truth.empty()) {
    j["ground_truth"] = nlohmann::json::array();
    for (const auto& p : g.ground_truth) j["ground_truth"].push_back(pose_to_json(p));
  }
  if (!g.outlier_labels.empty()) {
    j["outlier_labels"] = nlohmann::json::array();
    for (auto b : g.outlier_labels) j["outlier_labels"].push_back(b != 0);
  }
  if (!g.initial_guess.empty()) {
    j["initial_guess"] = nlohmann::json::array();
    for (const auto& p : g.initial_guess) j["initial_guess"].push_back(pose_to_json(p));
  }
  if (!g.original_ids.empty()) j["original_ids"] = g.original_ids;
  return j.dump(2);
}

PoseGraph from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PoseGraph g;
  g.n = j.at("n").get<int>();
  for (const auto& je : j.at("edges")) {
    MeasurementEdge e;
    e.from = je.at("from").get<int>();
    e.to = je.at("to").get<int>();
    e.rel_translation = Vec2(je.at("dx").get<double>(), je.at("dy").get<double>());
    e.rel_rotation = rot_from_angle(je.at("dtheta").get<double>());
    e.w_t = je.at("w_t").get<double>();
    e.w_R = je.at("w_R").get<double>();
    g.edges.push_back(e);
  }
  if (j.count("ground_truth")) {
    for (const auto& jp : j["ground_truth"]) g.ground_truth.push_back(pose_from_json(jp));
  }
  if (j.count("outlier_labels")) {
    for (const auto& jb : j["outlier_labels"]) g.outlier_labels.push_back(jb.get<bool>() ? 1 : 0);
  }
  if (j.count("initial_guess")) {
    for (const auto& jp : j["initial_guess"]) g.initial_guess.push_back(pose_from_json(jp));
  }
  if (j.count("original_ids")) {
    for (const auto& ji : j["original_ids"]) g.original_ids.push_back(ji.get<std::int64_t>());
  }
  return g;
}

PoseGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
  }
  return parse_g2o(in);
}

void save_graph_json(const std::string& path, const PoseGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << to_json(g) << "\n";
}

}  // namespace rpgo
