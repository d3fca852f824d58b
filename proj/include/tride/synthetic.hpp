#ifndef TRIDE_SYNTHETIC_HPP
#define TRIDE_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tride/initializers.hpp"
#include "tride/rng.hpp"
#include "tride/view_graph.hpp"

namespace tride {

/// Ground truth for a generated scene: camera locations and, per edge, the
/// unoriented direction of the line joining its two camera centers.
struct SceneTruth {
  std::vector<Eigen::Vector3d> locations;
  std::vector<Direction> directions;  // aligned with the graph's edge list
};

enum class GraphKind { kComplete, kErdosRenyi, kGeometric };

struct GraphModel {
  GraphKind kind = GraphKind::kComplete;
  int n = 0;
  double p = 0.5;  // Erdos-Renyi edge probability
  double r = 0.5;  // geometric connection radius
};

struct Scene {
  ViewGraph graph;
  SceneTruth truth;
};

/// Camera locations i.i.d. uniform in the unit cube, edges per the model,
/// evidence lists empty. Resamples locations (up to a retry budget) if a
/// connected pair coincides; throws GenerationFailure past the budget.
Scene gen_scene(const GraphModel& model, std::uint64_t seed);

/// Correspondence normals for one edge: ceil(inlier_frac * n) inliers
/// uniform on the great circle orthogonal to the true direction, each
/// perturbed by a rotation of folded-Gaussian(noise_deg) angle about a
/// random axis tangent to the normal; the rest uniform on the sphere.
/// Deterministically shuffled.
Eigen::Matrix3Xd gen_evidence(const Direction& truth_dir, int n_matches,
                              double inlier_frac, double noise_deg, StreamRng& rng);

struct CorruptionSpec {
  double edge_fraction = 0.0;   // probability an edge is corrupted
  double match_fraction = 0.0;  // fraction of its normals replaced
  double inlier_noise_deg = 0.0;
};

/// Marks each edge corrupted independently with probability edge_fraction
/// and, on corrupted edges, replaces ceil(match_fraction * n_e) normals
/// (chosen without replacement) with uniform-sphere normals. Returns the
/// corruption mask.
std::vector<std::uint8_t> corrupt(ViewGraph& graph, const CorruptionSpec& spec,
                                  std::uint64_t seed);

/// Two-class instance for the one-sweep recovery experiments. Clean edges
/// start at the exact true direction with evidence concentrated enough to
/// reach roughly anchor_support; weak edges start at a random direction
/// whose evidence supports the wrong direction at roughly weak_support while
/// still containing exact inliers so candidate pools can reach the truth.
struct TheoryInstanceConfig {
  GraphModel model;
  double q = 0.3;  // weak-edge probability
  bool pool_contains_truth = true;
  double anchor_support = 0.9;   // target support of clean edges
  double weak_support = 0.05;    // target support of weak initializations
  double true_inlier_frac = 0.2; // exact-inlier share on weak edges
  int matches = 80;
  double sigma_deg = 1.0;
  std::uint64_t seed = 0;
};

struct TheoryInstance {
  ViewGraph graph;
  SceneTruth truth;
  InitResult init;
  std::vector<std::uint8_t> clean;  // 1 = clean anchor edge
};

TheoryInstance gen_theory_instance(const TheoryInstanceConfig& config);

/// Expected support of a direction against a uniform-sphere normal:
/// integral_0^{pi/2} exp(-a^2 / (2 sigma^2)) cos(a) da, evaluated by
/// adaptive quadrature to an absolute error below 1e-8. Approximately
/// sqrt(pi/2) * sigma for small sigma.
double background_support_constant(double sigma_rad);

/// One-sweep worst-case error bound ((1 - a) / (a c_wd)) exp(-beta delta).
double theory_bound(double a, double c_wd, double beta, double delta);

}  // namespace tride

#endif  // TRIDE_SYNTHETIC_HPP
