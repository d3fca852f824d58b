#ifndef TRIDE_GNLM_HPP
#define TRIDE_GNLM_HPP

#include <vector>

#include <Eigen/Core>

#include "tride/tangent.hpp"
#include "tride/view_graph.hpp"

namespace tride {

// Determinant-enforcement baselines: a constrained Gauss-Newton projection
// onto the linearized triangle constraints and a damped Levenberg-Marquardt
// least-squares variant coupling point and triangle residuals. Both operate
// in per-edge tangent planes and retract back to the sphere each step.

/// Per-edge direction plus a 3x2 orthonormal tangent basis with
/// basis^T g = 0. Bases are rebuilt after every retraction.
struct TangentState {
  std::vector<Direction> directions;
  std::vector<Eigen::Matrix<double, 3, 2>> bases;
};

TangentState make_tangent_state(const std::vector<Direction>& directions);

/// One linearized determinant constraint: the residual, the geometric-mean
/// degeneracy score of the three pairwise cross products, and the 1x2
/// Jacobian blocks for the triangle's three edges.
struct TriangleRow {
  int triangle = -1;
  double residual = 0.0;
  double degeneracy = 0.0;
  int edges[3] = {-1, -1, -1};
  Eigen::Matrix<double, 1, 2> blocks[3];
};

/// Builds one row per triangle whose degeneracy score exceeds a_min.
std::vector<TriangleRow> build_det_system(const TangentState& state,
                                          const TriangleIndex& tri, double a_min);

/// Largest absolute determinant residual over all graph triangles
/// (degenerate ones included).
double max_abs_residual(const TangentState& state, const TriangleIndex& tri);

struct GnStats {
  bool empty = false;  // no retained rows; state returned unchanged
  int rows = 0;
  double max_abs_residual_before = 0.0;
};

/// Minimum-norm tangent correction that zeroes the linearized determinant
/// residuals, via the KKT system [[I, C^T], [C, -rho I]] [z; y] = [0; -d].
/// A singular solve at rho = 0 is retried once with rho = 1e-8 and then
/// throws SolveFailure.
std::pair<TangentState, GnStats> gn_step(const TangentState& state,
                                         const TriangleIndex& tri, double rho,
                                         double a_min);

struct GnConfig {
  int iterations = 5;
  double rho = 1e-8;
  double a_min = 1e-3;
};

struct GnTrace {
  TangentState state;
  std::vector<double> max_abs_residual;  // after each completed iteration
  bool solve_failed = false;
};

GnTrace run_gn(const TangentState& state, const TriangleIndex& tri,
               const GnConfig& config);

struct LmConfig {
  int iterations = 10;
  int point_subset = 50;     // per-edge normals with smallest |g.x|
  double cauchy_c = 2.385;
  double lambda_tri = 1.0;   // triangle-term weight
  double beta = 15.0;        // reliability sharpness for triangle weights
  double mu0 = 1e-3;         // initial damping
  double mu_up = 10.0;
  double mu_down = 1.0 / 3.0;
  double a_min = 1e-3;
  double sigma_floor = 1e-6;  // robust-scale floor
};

struct LmStepResult {
  TangentState state;
  bool accepted = false;
  double mu_next = 0.0;
  double objective_before = 0.0;
  double objective_after = 0.0;  // at the returned state, frozen weights
};

/// One damped step of the coupled point + triangle least-squares model.
/// Point rows use Cauchy weights on the per-edge subset of smallest current
/// residuals; triangle rows are weighted by the product of edge
/// reliabilities exp(-beta s_e), normalized. The step is accepted only if
/// the frozen-weight objective does not increase; mu shrinks on acceptance
/// and grows on rejection.
LmStepResult lm_step(const TangentState& state, const ViewGraph& graph,
                     const TriangleIndex& tri, const LmConfig& config, double mu);

struct LmTrace {
  TangentState state;
  std::vector<double> accepted_objectives;
  std::vector<bool> accepted;
};

LmTrace run_lm(const TangentState& state, const ViewGraph& graph,
               const TriangleIndex& tri, const LmConfig& config);

}  // namespace tride

#endif  // TRIDE_GNLM_HPP
