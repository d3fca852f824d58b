#ifndef TRIDE_INITIALIZERS_HPP
#define TRIDE_INITIALIZERS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tride/view_graph.hpp"

namespace tride {

enum class InitMethod { kPca, kFms, kRandom };

/// Per-edge starting state for the sweep engine: a unit sign-canonical
/// direction and a badness score in [0, 1].
struct InitResult {
  std::vector<Direction> directions;
  Eigen::VectorXd badness;
  /// Edges that lacked evidence for pca/fms and fell back to a random draw.
  std::vector<int> fallback_edges;
};

/// Direction of the least-populated axis of the evidence: the unit
/// eigenvector for the smallest eigenvalue of (1/n) sum x x^T. This is the
/// least-squares estimate under the point-orthogonality model.
/// Throws InsufficientEvidence for fewer than 2 normals.
Direction pca_direction(const Eigen::Matrix3Xd& normals);

/// Iteratively reweighted PCA with weights 1/max(|g.x|, delta), a fast
/// median-subspace style robust variant. Starts from pca_direction and stops
/// when successive iterates differ by less than 1e-7 rad or at max_iter.
Direction fms_direction(const Eigen::Matrix3Xd& normals, int max_iter = 100,
                        double delta = 1e-10);

/// Uniform direction on the sphere, sign-canonical, fully determined by
/// (seed, edge_id).
Direction random_direction(std::uint64_t seed, int edge_id);

/// Gaussian-kernel average support of g over the evidence columns:
/// (1/n) sum_r exp(-arcsin^2(|g.x_r|) / (2 sigma^2)). Returns 0 on empty
/// evidence (maximal badness).
double point_support(const Direction& g, const Eigen::Matrix3Xd& evidence,
                     double sigma_rad);

/// Runs the chosen per-edge initializer over the whole graph and scores each
/// result: badness = 1 - point_support, except for the random method whose
/// initial badness is itself Uniform[0,1] per edge. pca/fms edges with fewer
/// than 2 normals fall back to random_direction and are recorded in
/// fallback_edges.
InitResult initialize(const ViewGraph& graph, InitMethod method,
                      double sigma_deg, std::uint64_t seed);

}  // namespace tride

#endif  // TRIDE_INITIALIZERS_HPP
