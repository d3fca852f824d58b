#include "tride/scene_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace tride {

namespace {

using nlohmann::json;

Eigen::Vector3d parse_vec3(const json& node, const char* what) {
  if (!node.is_array() || node.size() != 3)
    throw std::runtime_error(std::string("scene: ") + what + " must be a 3-array");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!node[i].is_number())
      throw std::runtime_error(std::string("scene: non-numeric ") + what);
    v[i] = node[i].get<double>();
  }
  if (!v.allFinite())
    throw std::runtime_error(std::string("scene: non-finite ") + what);
  return v;
}

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

SceneFile parse_scene(const json& root) {
  if (!root.contains("n_cam") || !root["n_cam"].is_number_integer())
    throw std::runtime_error("scene: missing integer n_cam");
  const int n_cam = root["n_cam"].get<int>();

  if (!root.contains("edges") || !root["edges"].is_array())
    throw std::runtime_error("scene: missing edges array");
  std::vector<EdgeKey> edges;
  for (const json& pair : root["edges"]) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::runtime_error("scene: edge must be a pair");
    edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
  }

  SceneFile scene;
  try {
    scene.graph = ViewGraph(n_cam, std::move(edges));
  } catch (const std::invalid_argument& err) {
    throw std::runtime_error(std::string("scene: ") + err.what());
  }

  if (!root.contains("normals") || !root["normals"].is_array() ||
      root["normals"].size() != static_cast<std::size_t>(scene.graph.n_edges()))
    throw std::runtime_error("scene: normals must list one array per edge");
  for (int e = 0; e < scene.graph.n_edges(); ++e) {
    const json& list = root["normals"][e];
    Eigen::Matrix3Xd normals(3, list.size());
    for (std::size_t c = 0; c < list.size(); ++c)
      normals.col(c) = unit_normalize(parse_vec3(list[c], "normal"));
    scene.graph.set_evidence(e, std::move(normals));
  }

  if (root.contains("truth")) {
    const json& truth = root["truth"];
    if (!truth.contains("locations") || !truth["locations"].is_array() ||
        truth["locations"].size() != static_cast<std::size_t>(n_cam))
      throw std::runtime_error("scene: truth.locations must list one point per camera");
    SceneTruth parsed;
    for (const json& point : truth["locations"])
      parsed.locations.push_back(parse_vec3(point, "location"));
    parsed.directions.reserve(scene.graph.n_edges());
    for (const EdgeKey& edge : scene.graph.edges())
      parsed.directions.push_back(unit_normalize(
          (parsed.locations[edge.i] - parsed.locations[edge.j]).eval()));
    scene.truth = std::move(parsed);
  }

  if (root.contains("corrupt_mask")) {
    const json& mask = root["corrupt_mask"];
    if (!mask.is_array() || mask.size() != static_cast<std::size_t>(scene.graph.n_edges()))
      throw std::runtime_error("scene: corrupt_mask must list one flag per edge");
    std::vector<std::uint8_t> parsed;
    for (const json& flag : mask) parsed.push_back(flag.get<int>() != 0 ? 1 : 0);
    scene.corrupt_mask = std::move(parsed);
  }
  return scene;
}

}  // namespace

SceneFile load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scene: cannot open " + path);
  json root;
  try {
    in >> root;
  } catch (const json::exception& err) {
    throw std::runtime_error("scene: parse error in " + path + ": " + err.what());
  }
  try {
    return parse_scene(root);
  } catch (const json::exception& err) {
    throw std::runtime_error("scene: malformed " + path + ": " + err.what());
  }
}

void save_scene(const SceneFile& scene, const std::string& path) {
  json root;
  root["n_cam"] = scene.graph.n_cameras();
  json edges = json::array();
  for (const EdgeKey& edge : scene.graph.edges())
    edges.push_back(json::array({edge.i, edge.j}));
  root["edges"] = std::move(edges);

  json normals = json::array();
  for (int e = 0; e < scene.graph.n_edges(); ++e) {
    json list = json::array();
    const Eigen::Matrix3Xd& evidence = scene.graph.evidence(e);
    for (int c = 0; c < evidence.cols(); ++c) list.push_back(vec3_to_json(evidence.col(c)));
    normals.push_back(std::move(list));
  }
  root["normals"] = std::move(normals);

  if (scene.truth) {
    json locations = json::array();
    for (const Eigen::Vector3d& y : scene.truth->locations)
      locations.push_back(vec3_to_json(y));
    root["truth"] = json{{"locations", std::move(locations)}};
  }
  if (scene.corrupt_mask) {
    json mask = json::array();
    for (std::uint8_t flag : *scene.corrupt_mask) mask.push_back(static_cast<int>(flag));
    root["corrupt_mask"] = std::move(mask);
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("scene: cannot write " + path);
  out << root.dump(1) << "\n";
}

}  // namespace tride
