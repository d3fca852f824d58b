#include "tride/initializers.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "tride/rng.hpp"

namespace tride {

namespace {

// Lexicographic comparison of canonical representatives, used only to break
// eigenvalue ties deterministically.
bool lex_less(const Direction& a, const Direction& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

Direction smallest_eigenvector(const Eigen::Matrix3d& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver;
  solver.computeDirect(cov);  // closed-form 3x3 path
  const Eigen::Vector3d evals = solver.eigenvalues();  // ascending
  Direction best = unit_normalize(solver.eigenvectors().col(0));
  for (int c = 1; c < 3; ++c) {
    if (evals[c] - evals[0] > 1e-12) break;
    const Direction candidate = unit_normalize(solver.eigenvectors().col(c));
    if (lex_less(best, candidate)) best = candidate;
  }
  return best;
}

Eigen::Matrix3d weighted_covariance(const Eigen::Matrix3Xd& normals,
                                    const Eigen::VectorXd& weights) {
  return (normals * weights.asDiagonal() * normals.transpose()) / weights.sum();
}

}  // namespace

Direction pca_direction(const Eigen::Matrix3Xd& normals) {
  if (normals.cols() < 2)
    throw InsufficientEvidence("pca_direction: need at least 2 normals");
  const Eigen::Matrix3d cov =
      (normals * normals.transpose()) / static_cast<double>(normals.cols());
  return smallest_eigenvector(cov);
}

Direction fms_direction(const Eigen::Matrix3Xd& normals, int max_iter, double delta) {
  if (normals.cols() < 2)
    throw InsufficientEvidence("fms_direction: need at least 2 normals");
  Direction g = pca_direction(normals);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd weights =
        (normals.transpose() * g).array().abs().max(delta).inverse();
    const Direction next = smallest_eigenvector(weighted_covariance(normals, weights));
    const double step_rad = std::acos(
        std::clamp(std::abs(next.dot(g)), 0.0, 1.0));
    g = next;
    if (step_rad < 1e-7) break;
  }
  return g;
}

Direction random_direction(std::uint64_t seed, int edge_id) {
  StreamRng rng(seed, StreamKind::kInit, static_cast<std::uint64_t>(edge_id));
  return canonicalize(rng.unit_vector());
}

double point_support(const Direction& g, const Eigen::Matrix3Xd& evidence,
                     double sigma_rad) {
  if (evidence.cols() == 0) return 0.0;
  const Eigen::ArrayXd dots =
      (evidence.transpose() * g).array().abs().min(1.0);
  const Eigen::ArrayXd residuals = dots.asin();
  return (-(residuals.square()) / (2.0 * sigma_rad * sigma_rad)).exp().mean();
}

InitResult initialize(const ViewGraph& graph, InitMethod method,
                      double sigma_deg, std::uint64_t seed) {
  const double sigma_rad = deg_to_rad(sigma_deg);
  InitResult out;
  out.directions.resize(graph.n_edges());
  out.badness.resize(graph.n_edges());
  for (int e = 0; e < graph.n_edges(); ++e) {
    const Eigen::Matrix3Xd& evidence = graph.evidence(e);
    Direction g;
    switch (method) {
      case InitMethod::kRandom:
        g = random_direction(seed, e);
        break;
      case InitMethod::kPca:
      case InitMethod::kFms:
        if (evidence.cols() < 2) {
          g = random_direction(seed, e);
          out.fallback_edges.push_back(e);
        } else {
          g = method == InitMethod::kPca ? pca_direction(evidence)
                                         : fms_direction(evidence);
        }
        break;
    }
    out.directions[e] = g;
    if (method == InitMethod::kRandom) {
      StreamRng rng(seed, StreamKind::kInit, static_cast<std::uint64_t>(e), 1);
      out.badness[e] = rng.uniform();
    } else {
      out.badness[e] = 1.0 - point_support(g, evidence, sigma_rad);
    }
  }
  return out;
}

}  // namespace tride
