#include "tride/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tride/tangent.hpp"

namespace tride {

namespace {

constexpr int kSceneRetries = 100;
constexpr double kMinBaseline = 1e-9;

std::vector<EdgeKey> model_edges(const GraphModel& model,
                                 const std::vector<Eigen::Vector3d>& locations,
                                 StreamRng& rng) {
  std::vector<EdgeKey> edges;
  for (int i = 0; i < model.n; ++i) {
    for (int j = i + 1; j < model.n; ++j) {
      bool keep = false;
      switch (model.kind) {
        case GraphKind::kComplete:
          keep = true;
          break;
        case GraphKind::kErdosRenyi:
          keep = rng.uniform() < model.p;
          break;
        case GraphKind::kGeometric:
          keep = (locations[i] - locations[j]).norm() <= model.r;
          break;
      }
      if (keep) edges.push_back({i, j});
    }
  }
  return edges;
}

/// Uniform point on the great circle orthogonal to dir.
Eigen::Vector3d great_circle_point(const Direction& dir, StreamRng& rng) {
  const Eigen::Matrix<double, 3, 2> basis = tangent_basis(dir);
  const double theta = rng.uniform(0.0, 2.0 * kPi);
  return std::cos(theta) * basis.col(0) + std::sin(theta) * basis.col(1);
}

/// Rotates x by `angle_rad` about a uniformly random axis orthogonal to x.
Eigen::Vector3d perturb_on_sphere(const Eigen::Vector3d& x, double angle_rad,
                                  StreamRng& rng) {
  const Eigen::Vector3d axis = great_circle_point(x, rng);
  return std::cos(angle_rad) * x + std::sin(angle_rad) * axis.cross(x);
}

void shuffle_columns(Eigen::Matrix3Xd& m, StreamRng& rng) {
  for (int i = static_cast<int>(m.cols()) - 1; i > 0; --i) {
    const int j = rng.uniform_index(i + 1);
    m.col(i).swap(m.col(j));
  }
}

double simpson(double (*f)(double, double), double sigma, double a, double b) {
  return (b - a) / 6.0 *
         (f(a, sigma) + 4.0 * f(0.5 * (a + b), sigma) + f(b, sigma));
}

double adaptive_simpson(double (*f)(double, double), double sigma, double a,
                        double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = simpson(f, sigma, a, mid);
  const double right = simpson(f, sigma, mid, b);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, sigma, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, sigma, mid, b, right, 0.5 * tol, depth - 1);
}

double background_integrand(double alpha, double sigma) {
  return std::exp(-alpha * alpha / (2.0 * sigma * sigma)) * std::cos(alpha);
}

}  // namespace

Scene gen_scene(const GraphModel& model, std::uint64_t seed) {
  if (model.n < 0) throw std::invalid_argument("gen_scene: negative camera count");
  if (model.kind == GraphKind::kErdosRenyi && !(model.p >= 0.0 && model.p <= 1.0))
    throw std::invalid_argument("gen_scene: p outside [0, 1]");
  if (model.kind == GraphKind::kGeometric && !(model.r > 0.0))
    throw std::invalid_argument("gen_scene: r must be > 0");

  for (int attempt = 0; attempt < kSceneRetries; ++attempt) {
    StreamRng rng(seed, StreamKind::kScene, static_cast<std::uint64_t>(attempt));
    std::vector<Eigen::Vector3d> locations(model.n);
    for (auto& y : locations)
      y = Eigen::Vector3d(rng.uniform(), rng.uniform(), rng.uniform());

    const std::vector<EdgeKey> edges = model_edges(model, locations, rng);
    const bool coincident =
        std::any_of(edges.begin(), edges.end(), [&](const EdgeKey& e) {
          return (locations[e.i] - locations[e.j]).norm() <= kMinBaseline;
        });
    if (coincident) continue;

    Scene scene{ViewGraph(model.n, edges), SceneTruth{}};
    scene.truth.locations = std::move(locations);
    scene.truth.directions.reserve(edges.size());
    for (const EdgeKey& e : edges)
      scene.truth.directions.push_back(unit_normalize(
          (scene.truth.locations[e.i] - scene.truth.locations[e.j]).eval()));
    return scene;
  }
  throw GenerationFailure("gen_scene: coincident cameras after retry budget");
}

Eigen::Matrix3Xd gen_evidence(const Direction& truth_dir, int n_matches,
                              double inlier_frac, double noise_deg, StreamRng& rng) {
  if (n_matches < 0) throw std::invalid_argument("gen_evidence: negative match count");
  const int n_inliers =
      std::min(n_matches, static_cast<int>(std::ceil(inlier_frac * n_matches)));
  const double noise_rad = deg_to_rad(noise_deg);

  Eigen::Matrix3Xd normals(3, n_matches);
  for (int c = 0; c < n_matches; ++c) {
    Eigen::Vector3d x;
    if (c < n_inliers) {
      x = great_circle_point(truth_dir, rng);
      if (noise_rad > 0.0)
        x = perturb_on_sphere(x, std::abs(rng.gaussian()) * noise_rad, rng);
    } else {
      x = rng.unit_vector();
    }
    normals.col(c) = canonicalize(x);
  }
  shuffle_columns(normals, rng);
  return normals;
}

std::vector<std::uint8_t> corrupt(ViewGraph& graph, const CorruptionSpec& spec,
                                  std::uint64_t seed) {
  if (!(spec.edge_fraction >= 0.0 && spec.edge_fraction <= 1.0) ||
      !(spec.match_fraction >= 0.0 && spec.match_fraction <= 1.0))
    throw std::invalid_argument("corrupt: fractions outside [0, 1]");

  std::vector<std::uint8_t> mask(graph.n_edges(), 0);
  for (int e = 0; e < graph.n_edges(); ++e) {
    StreamRng rng(seed, StreamKind::kCorrupt, static_cast<std::uint64_t>(e));
    if (rng.uniform() >= spec.edge_fraction) continue;
    mask[e] = 1;
    Eigen::Matrix3Xd normals = graph.evidence(e);
    const int n = static_cast<int>(normals.cols());
    const int n_replace =
        std::min(n, static_cast<int>(std::ceil(spec.match_fraction * n)));
    // Partial Fisher-Yates picks the replaced indices without replacement.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < n_replace; ++i) {
      const int j = i + rng.uniform_index(n - i);
      std::swap(order[i], order[j]);
      normals.col(order[i]) = canonicalize(rng.unit_vector());
    }
    graph.set_evidence(e, std::move(normals));
  }
  return mask;
}

TheoryInstance gen_theory_instance(const TheoryInstanceConfig& config) {
  if (!(config.anchor_support > config.weak_support))
    throw std::invalid_argument("gen_theory_instance: need anchor > weak support");
  const double sigma_rad = deg_to_rad(config.sigma_deg);
  const double background = background_support_constant(sigma_rad);
  // Exact inliers contribute support 1 and uniform normals contribute the
  // background constant, so a target support A maps to the inlier fraction
  // (A - b) / (1 - b).
  const auto support_to_frac = [&](double support) {
    return std::clamp((support - background) / (1.0 - background), 0.0, 1.0);
  };
  const double clean_frac = support_to_frac(config.anchor_support);
  const double wrong_frac = support_to_frac(config.weak_support);

  Scene scene = gen_scene(config.model, config.seed);
  TheoryInstance out{std::move(scene.graph), std::move(scene.truth), {}, {}};
  out.clean.assign(out.graph.n_edges(), 0);
  out.init.directions.resize(out.graph.n_edges());
  out.init.badness.resize(out.graph.n_edges());

  for (int e = 0; e < out.graph.n_edges(); ++e) {
    StreamRng rng(config.seed, StreamKind::kTheory, static_cast<std::uint64_t>(e));
    const Direction& g_star = out.truth.directions[e];
    const bool clean = rng.uniform() >= config.q;
    Direction g0;
    Eigen::Matrix3Xd normals(3, config.matches);
    if (clean) {
      out.clean[e] = 1;
      g0 = canonicalize(g_star);
      const int n_true = static_cast<int>(std::ceil(clean_frac * config.matches));
      for (int c = 0; c < config.matches; ++c)
        normals.col(c) = canonicalize(
            c < n_true ? great_circle_point(g_star, rng) : rng.unit_vector());
    } else {
      g0 = canonicalize(rng.unit_vector());
      int n_true = 0;
      if (config.pool_contains_truth)
        n_true = std::max(
            2, static_cast<int>(std::ceil(config.true_inlier_frac * config.matches)));
      n_true = std::min(n_true, config.matches);
      const int n_wrong =
          std::min(config.matches - n_true,
                   static_cast<int>(std::ceil(wrong_frac * config.matches)));
      for (int c = 0; c < config.matches; ++c) {
        Eigen::Vector3d x;
        if (c < n_true)
          x = great_circle_point(g_star, rng);
        else if (c < n_true + n_wrong)
          x = great_circle_point(g0, rng);
        else
          x = rng.unit_vector();
        normals.col(c) = canonicalize(x);
      }
    }
    shuffle_columns(normals, rng);
    out.graph.set_evidence(e, std::move(normals));
    out.init.directions[e] = g0;
    out.init.badness[e] = 1.0 - point_support(g0, out.graph.evidence(e), sigma_rad);
  }
  return out;
}

double background_support_constant(double sigma_rad) {
  if (!(sigma_rad > 0.0))
    throw std::invalid_argument("background_support_constant: sigma must be > 0");
  const double a = 0.0;
  const double b = kPi / 2.0;
  const double whole = simpson(&background_integrand, sigma_rad, a, b);
  return adaptive_simpson(&background_integrand, sigma_rad, a, b, whole, 1e-10, 60);
}

double theory_bound(double a, double c_wd, double beta, double delta) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("theory_bound: a in (0, 1]");
  if (!(c_wd > 0.0)) throw std::invalid_argument("theory_bound: c_wd must be > 0");
  if (delta < 0.0) throw std::invalid_argument("theory_bound: delta must be >= 0");
  return (1.0 - a) / (a * c_wd) * std::exp(-beta * delta);
}

}  // namespace tride
