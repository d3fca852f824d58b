#ifndef TRIDE_SCENE_IO_HPP
#define TRIDE_SCENE_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "tride/synthetic.hpp"

namespace tride {

/// On-disk scene: the view graph with its evidence, optionally ground-truth
/// camera locations and a per-edge corruption mask.
///
/// JSON layout:
///   {
///     "n_cam": int,
///     "edges": [[i, j], ...],
///     "normals": [[[x, y, z], ...], ...],          // one list per edge
///     "truth": {"locations": [[x, y, z], ...]},    // optional
///     "corrupt_mask": [0, 1, ...]                  // optional, per edge
///   }
struct SceneFile {
  ViewGraph graph;
  std::optional<SceneTruth> truth;
  std::optional<std::vector<std::uint8_t>> corrupt_mask;
};

/// Parses and validates a scene; normals are renormalized and
/// sign-canonicalized on load. Throws std::runtime_error with a readable
/// message on malformed input.
SceneFile load_scene(const std::string& path);

void save_scene(const SceneFile& scene, const std::string& path);

}  // namespace tride

#endif  // TRIDE_SCENE_IO_HPP
