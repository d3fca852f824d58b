#ifndef TRIDE_EVAL_HPP
#define TRIDE_EVAL_HPP

#include <string>
#include <vector>

#include "tride/sweep.hpp"
#include "tride/synthetic.hpp"

namespace tride {

/// Aggregate unoriented angular errors in degrees. The 90th percentile uses
/// the nearest-rank element at index floor(0.9 n) of the ascending sort.
struct ErrorStats {
  double mean_deg = 0.0;
  double median_deg = 0.0;
  double p90_deg = 0.0;
};

std::vector<double> per_edge_error_deg(const std::vector<Direction>& estimate,
                                       const SceneTruth& truth);

ErrorStats direction_error_stats(const std::vector<Direction>& estimate,
                                 const SceneTruth& truth);

/// Fraction of edges whose unoriented angle to the truth is <= tol_deg.
double recovery_fraction(const std::vector<Direction>& estimate,
                         const SceneTruth& truth, double tol_deg);

struct PhasePoint {
  GraphKind kind = GraphKind::kComplete;
  int n = 0;
  double p_or_r = 0.0;
  double q = 0.0;
  int seeds = 0;
  double recovery = 0.0;        // mean exact-recovery fraction over seeds
  double mean_error_deg = 0.0;  // mean of per-seed mean errors
};

struct PhaseGrid {
  std::vector<GraphModel> models;
  std::vector<double> q_grid;
  int seeds = 5;
  int sweeps = 1;  // 0 evaluates the initializer only
  double tol_deg = 1e-6;
  double anchor_support = 0.9;
  double weak_support = 0.05;
  double true_inlier_frac = 0.5;
  int matches = 40;
};

/// Recovery curve over the (model, q) grid on two-class instances. Points
/// are independent jobs; output order follows the grid regardless of the
/// number of worker threads.
std::vector<PhasePoint> phase_sweep(const PhaseGrid& grid, const SweepConfig& config,
                                    std::uint64_t seed, int threads = 1);

/// Inversions of the expected monotone decrease of recovery along the
/// q grid for one model (recovery rising while q grows counts as one).
int count_recovery_inversions(const std::vector<PhasePoint>& points);

enum class AblationVariant { kInput, kPointOnly, kUniform, kStatic, kDynamic };

std::string variant_name(AblationVariant variant);

struct AblationRow {
  AblationVariant variant;
  ErrorStats stats;
};

/// Runs each requested variant on the same instance, init, and seed.
std::vector<AblationRow> ablation_run(const ViewGraph& graph, const TriangleIndex& tri,
                                      const SceneTruth& truth, const InitResult& init,
                                      const std::vector<AblationVariant>& variants,
                                      const SweepConfig& config, int threads = 1);

}  // namespace tride

#endif  // TRIDE_EVAL_HPP
