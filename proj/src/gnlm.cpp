#include "tride/gnlm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "tride/errors.hpp"

namespace tride {

TangentState make_tangent_state(const std::vector<Direction>& directions) {
  TangentState state;
  state.directions = directions;
  state.bases.reserve(directions.size());
  for (const Direction& g : directions) state.bases.push_back(tangent_basis(g));
  return state;
}

std::vector<TriangleRow> build_det_system(const TangentState& state,
                                          const TriangleIndex& tri, double a_min) {
  std::vector<TriangleRow> rows;
  for (int t = 0; t < tri.n_triangles(); ++t) {
    const Triangle& triangle = tri.triangles()[t];
    const Direction& ga = state.directions[triangle.e_ij];
    const Direction& gb = state.directions[triangle.e_jk];
    const Direction& gc = state.directions[triangle.e_ik];
    const Eigen::Vector3d bc = gb.cross(gc);
    const Eigen::Vector3d ca = gc.cross(ga);
    const Eigen::Vector3d ab = ga.cross(gb);
    const double degeneracy = std::cbrt(bc.norm() * ca.norm() * ab.norm());
    if (degeneracy <= a_min) continue;
    TriangleRow row;
    row.triangle = t;
    row.residual = ga.dot(bc);
    row.degeneracy = degeneracy;
    row.edges[0] = triangle.e_ij;
    row.edges[1] = triangle.e_jk;
    row.edges[2] = triangle.e_ik;
    row.blocks[0] = bc.transpose() * state.bases[triangle.e_ij];
    row.blocks[1] = ca.transpose() * state.bases[triangle.e_jk];
    row.blocks[2] = ab.transpose() * state.bases[triangle.e_ik];
    rows.push_back(row);
  }
  return rows;
}

double max_abs_residual(const TangentState& state, const TriangleIndex& tri) {
  double worst = 0.0;
  for (const Triangle& triangle : tri.triangles()) {
    const double d = triple_product(state.directions[triangle.e_ij],
                                    state.directions[triangle.e_jk],
                                    state.directions[triangle.e_ik]);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

namespace {

Eigen::MatrixXd stack_jacobian(const std::vector<TriangleRow>& rows, int n_edges) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(rows.size(), 2 * n_edges);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int s = 0; s < 3; ++s)
      jac.block<1, 2>(r, 2 * rows[r].edges[s]) = rows[r].blocks[s];
  return jac;
}

TangentState retract_all(const TangentState& state, const Eigen::VectorXd& step) {
  std::vector<Direction> directions(state.directions.size());
  for (std::size_t e = 0; e < state.directions.size(); ++e)
    directions[e] = retract(state.directions[e], state.bases[e],
                            step.segment<2>(2 * e));
  return make_tangent_state(directions);
}

}  // namespace

std::pair<TangentState, GnStats> gn_step(const TangentState& state,
                                         const TriangleIndex& tri, double rho,
                                         double a_min) {
  const int n_edges = static_cast<int>(state.directions.size());
  const std::vector<TriangleRow> rows = build_det_system(state, tri, a_min);

  GnStats stats;
  stats.rows = static_cast<int>(rows.size());
  if (rows.empty()) {
    stats.empty = true;
    return {state, stats};
  }
  Eigen::VectorXd residuals(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) residuals[r] = rows[r].residual;
  stats.max_abs_residual_before = residuals.cwiseAbs().maxCoeff();

  const Eigen::MatrixXd jac = stack_jacobian(rows, n_edges);
  const int n_rows = static_cast<int>(rows.size());
  const int dim = 2 * n_edges + n_rows;

  for (double reg : {rho, rho == 0.0 ? 1e-8 : rho}) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim, dim);
    kkt.topLeftCorner(2 * n_edges, 2 * n_edges).setIdentity();
    kkt.topRightCorner(2 * n_edges, n_rows) = jac.transpose();
    kkt.bottomLeftCorner(n_rows, 2 * n_edges) = jac;
    kkt.bottomRightCorner(n_rows, n_rows) =
        -reg * Eigen::MatrixXd::Identity(n_rows, n_rows);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    rhs.tail(n_rows) = -residuals;

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(kkt);
    if (!qr.isInvertible()) continue;
    const Eigen::VectorXd solution = qr.solve(rhs);
    if (!solution.allFinite()) continue;
    return {retract_all(state, solution.head(2 * n_edges)), stats};
  }
  throw SolveFailure("gn_step: singular KKT system");
}

GnTrace run_gn(const TangentState& state, const TriangleIndex& tri,
               const GnConfig& config) {
  GnTrace trace;
  trace.state = state;
  for (int it = 0; it < config.iterations; ++it) {
    try {
      auto [next, stats] = gn_step(trace.state, tri, config.rho, config.a_min);
      trace.state = std::move(next);
    } catch (const SolveFailure&) {
      trace.solve_failed = true;
      break;
    }
    trace.max_abs_residual.push_back(max_abs_residual(trace.state, tri));
  }
  return trace;
}

namespace {

// Frozen linearization data for one LM step.
struct LmModel {
  // Point rows, grouped per edge.
  struct PointRow {
    int edge;
    Eigen::Vector3d normal;
    double weight;  // Cauchy weight at the linearization point
  };
  std::vector<PointRow> points;
  std::vector<TriangleRow> triangles;
  std::vector<double> triangle_weights;  // normalized omega
};

LmModel build_lm_model(const TangentState& state, const ViewGraph& graph,
                       const TriangleIndex& tri, const LmConfig& config) {
  LmModel model;
  std::vector<double> mean_small_residual(graph.n_edges(), 0.0);

  for (int e = 0; e < graph.n_edges(); ++e) {
    const Eigen::Matrix3Xd& evidence = graph.evidence(e);
    const int n = static_cast<int>(evidence.cols());
    if (n == 0) continue;
    const Eigen::VectorXd dots = evidence.transpose() * state.directions[e];

    const int subset = std::min(config.point_subset, n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Non-finite residuals sort last (NaN would break the ordering); they
    // still poison the solve, which rejects the step.
    const auto sort_key = [&](int i) {
      const double v = std::abs(dots[i]);
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    std::partial_sort(order.begin(), order.begin() + subset, order.end(),
                      [&](int a, int b) { return sort_key(a) < sort_key(b); });

    std::vector<double> abs_residuals(subset);
    for (int s = 0; s < subset; ++s) abs_residuals[s] = std::abs(dots[order[s]]);
    mean_small_residual[e] =
        std::accumulate(abs_residuals.begin(), abs_residuals.end(), 0.0) / subset;
    const double sigma =
        std::max(config.sigma_floor, 1.4826 * lower_median(abs_residuals));

    for (int s = 0; s < subset; ++s) {
      const double p = dots[order[s]];
      const double scaled = p / (config.cauchy_c * sigma);
      model.points.push_back(
          {e, evidence.col(order[s]),
           1.0 / (sigma * sigma) / (1.0 + scaled * scaled)});
    }
  }

  model.triangles = build_det_system(state, tri, config.a_min);
  model.triangle_weights.resize(model.triangles.size());
  double total = 0.0;
  for (std::size_t r = 0; r < model.triangles.size(); ++r) {
    const TriangleRow& row = model.triangles[r];
    double log_q = 0.0;
    for (int s = 0; s < 3; ++s)
      log_q -= config.beta * mean_small_residual[row.edges[s]];
    model.triangle_weights[r] = std::exp(log_q);
    total += model.triangle_weights[r];
  }
  if (total > 0.0)
    for (double& w : model.triangle_weights) w /= total;
  return model;
}

// Frozen-weight objective of the model's underlying residuals at a state.
double lm_objective(const LmModel& model, const TangentState& state,
                    const LmConfig& config, const TriangleIndex& tri) {
  double objective = 0.0;
  for (const LmModel::PointRow& row : model.points) {
    const double p = state.directions[row.edge].dot(row.normal);
    objective += 0.5 * row.weight * p * p;
  }
  for (std::size_t r = 0; r < model.triangles.size(); ++r) {
    const Triangle& triangle = tri.triangles()[model.triangles[r].triangle];
    const double d = triple_product(state.directions[triangle.e_ij],
                                    state.directions[triangle.e_jk],
                                    state.directions[triangle.e_ik]);
    objective += 0.5 * config.lambda_tri * model.triangle_weights[r] * d * d;
  }
  return objective;
}

}  // namespace

LmStepResult lm_step(const TangentState& state, const ViewGraph& graph,
                     const TriangleIndex& tri, const LmConfig& config, double mu) {
  const int n_edges = static_cast<int>(state.directions.size());
  const LmModel model = build_lm_model(state, graph, tri, config);

  Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(2 * n_edges, 2 * n_edges);
  Eigen::VectorXd gradient = Eigen::VectorXd::Zero(2 * n_edges);

  for (const LmModel::PointRow& row : model.points) {
    const double p = state.directions[row.edge].dot(row.normal);
    const Eigen::Matrix<double, 1, 2> block =
        row.normal.transpose() * state.bases[row.edge];
    hessian.block<2, 2>(2 * row.edge, 2 * row.edge) +=
        row.weight * block.transpose() * block;
    gradient.segment<2>(2 * row.edge) += row.weight * block.transpose() * p;
  }
  for (std::size_t r = 0; r < model.triangles.size(); ++r) {
    const TriangleRow& row = model.triangles[r];
    const double w = config.lambda_tri * model.triangle_weights[r];
    for (int a = 0; a < 3; ++a) {
      gradient.segment<2>(2 * row.edges[a]) +=
          w * row.blocks[a].transpose() * row.residual;
      for (int b = 0; b < 3; ++b)
        hessian.block<2, 2>(2 * row.edges[a], 2 * row.edges[b]) +=
            w * row.blocks[a].transpose() * row.blocks[b];
    }
  }

  LmStepResult result;
  result.objective_before = lm_objective(model, state, config, tri);

  Eigen::MatrixXd damped = hessian;
  for (int i = 0; i < 2 * n_edges; ++i) {
    const double d = hessian(i, i);
    damped(i, i) += mu * d + (d == 0.0 ? 1e-12 : 0.0);
  }
  const Eigen::VectorXd step = damped.ldlt().solve(-gradient);

  if (!step.allFinite()) {
    result.state = state;
    result.accepted = false;
    result.mu_next = mu * config.mu_up;
    result.objective_after = result.objective_before;
    return result;
  }

  TangentState candidate = retract_all(state, step);
  const double objective_after = lm_objective(model, candidate, config, tri);
  if (objective_after <= result.objective_before) {
    result.state = std::move(candidate);
    result.accepted = true;
    result.mu_next = mu * config.mu_down;
    result.objective_after = objective_after;
  } else {
    result.state = state;
    result.accepted = false;
    result.mu_next = mu * config.mu_up;
    result.objective_after = result.objective_before;
  }
  return result;
}

LmTrace run_lm(const TangentState& state, const ViewGraph& graph,
               const TriangleIndex& tri, const LmConfig& config) {
  LmTrace trace;
  trace.state = state;
  double mu = config.mu0;
  for (int it = 0; it < config.iterations; ++it) {
    LmStepResult step = lm_step(trace.state, graph, tri, config, mu);
    mu = step.mu_next;
    trace.accepted.push_back(step.accepted);
    if (step.accepted) {
      trace.state = std::move(step.state);
      trace.accepted_objectives.push_back(step.objective_after);
    }
  }
  return trace;
}

}  // namespace tride
