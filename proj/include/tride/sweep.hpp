#ifndef TRIDE_SWEEP_HPP
#define TRIDE_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tride/initializers.hpp"
#include "tride/rng.hpp"
#include "tride/view_graph.hpp"

namespace tride {

// Triangle-weighted message passing over the view graph. Each sweep lets
// every edge propose candidate directions from its own correspondence
// normals, verifies them against the triangles it closes with its
// neighbors' current directions, and refreshes the edge's reliability from
// the original measurements.

enum class WeightMode {
  kPointOnly,  // candidate selection by point badness alone, no triangles
  kUniform,    // equal weight per valid incident triangle
  kStatic,     // weights from the frozen initial badness
  kDynamic,    // weights refreshed from the current badness (full method)
};

struct SweepConfig {
  double sigma_deg = 1.0;    // support scale
  int n_cand = 25;           // random two-normal hypotheses per edge
  double beta = 15.0;        // triangle-weight sharpness
  double a_min = 1e-3;       // cross-product nondegeneracy threshold
  int k_max = 4;             // maximum sweeps
  double tau_stop_deg = 1e-3;  // early-stopping tolerance on the median move
  WeightMode mode = WeightMode::kDynamic;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument out of range
};

/// Double-buffered per-edge state: directions, badness scores, and the sweep
/// index they belong to.
struct DirectionField {
  std::vector<Direction> directions;
  Eigen::VectorXd badness;
  int sweep = 0;
};

DirectionField make_field(const InitResult& init);

struct SweepStats {
  double delta_deg = 0.0;        // median unoriented move over edges
  int changed_edges = 0;         // edges that left their incumbent direction
  std::int64_t score_evals = 0;  // candidate-triangle score terms
  double wall_time_s = 0.0;
};

struct SweepReport {
  std::vector<SweepStats> sweeps;
};

/// Candidate pool for one edge: the current direction first, then up to
/// n_cand normalized cross products of sampled ordered normal pairs
/// (r1 != r2, uniform with replacement over pairs). Pairs whose cross
/// product has norm <= a_min are skipped without resampling, so the pool may
/// come up short. With fewer than 2 normals the pool is just {current}.
std::vector<Direction> build_candidate_pool(const Eigen::Matrix3Xd& evidence,
                                            const Direction& current, int n_cand,
                                            double a_min, StreamRng& rng);

/// Normal of the plane spanned by two edge directions, sign-canonical;
/// empty when the cross product norm is <= a_min (degenerate triangle).
std::optional<Direction> triangle_normal(const Direction& ga, const Direction& gb,
                                         double a_min);

/// Softmax weights exp(-beta (s_a + s_b)) normalized over the valid incident
/// triangles, computed with max-subtraction. Sums to 1.
std::vector<double> triangle_weights(
    const std::vector<std::pair<double, double>>& badness_pairs, double beta);

/// Weighted triangle inconsistency sum w_t |c . n_t| of one candidate.
double score_candidate(const Direction& c, const std::vector<Direction>& normals,
                       const std::vector<double>& weights);

struct SweepResult {
  DirectionField field;
  SweepStats stats;
};

/// One synchronous sweep: reads only `field`, writes a fresh field. Edges
/// without a valid triangle context carry direction and badness over
/// verbatim (except in point-only mode, which never consults triangles).
/// `frozen_badness` supplies the static-mode weights and is ignored in the
/// other modes. Per-edge RNG streams are keyed by (seed, field.sweep, edge),
/// so results do not depend on edge processing order or thread count.
SweepResult sweep(const ViewGraph& graph, const TriangleIndex& tri,
                  const DirectionField& field, const SweepConfig& config,
                  const Eigen::VectorXd* frozen_badness = nullptr, int threads = 1);

struct RunResult {
  DirectionField field;
  SweepReport report;
};

/// Runs up to k_max sweeps, stopping early once t >= 1 and the median move
/// drops below tau_stop.
RunResult run(const ViewGraph& graph, const TriangleIndex& tri,
              const InitResult& init, const SweepConfig& config, int threads = 1);

}  // namespace tride

#endif  // TRIDE_SWEEP_HPP
