#include "tride/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace tride {

std::vector<double> per_edge_error_deg(const std::vector<Direction>& estimate,
                                       const SceneTruth& truth) {
  if (estimate.size() != truth.directions.size())
    throw InputMismatch("per_edge_error_deg: estimate and truth edge sets differ");
  std::vector<double> errors(estimate.size());
  for (std::size_t e = 0; e < estimate.size(); ++e)
    errors[e] = unoriented_angle_deg(estimate[e], truth.directions[e]);
  return errors;
}

ErrorStats direction_error_stats(const std::vector<Direction>& estimate,
                                 const SceneTruth& truth) {
  std::vector<double> errors = per_edge_error_deg(estimate, truth);
  ErrorStats stats;
  if (errors.empty()) return stats;
  stats.mean_deg =
      std::accumulate(errors.begin(), errors.end(), 0.0) / errors.size();
  stats.median_deg = lower_median(errors);
  std::sort(errors.begin(), errors.end());
  const auto rank = std::min(errors.size() - 1,
                             static_cast<std::size_t>(0.9 * errors.size()));
  stats.p90_deg = errors[rank];
  return stats;
}

double recovery_fraction(const std::vector<Direction>& estimate,
                         const SceneTruth& truth, double tol_deg) {
  if (tol_deg < 0) throw std::invalid_argument("recovery_fraction: negative tolerance");
  const std::vector<double> errors = per_edge_error_deg(estimate, truth);
  if (errors.empty()) return 0.0;
  const auto hits = std::count_if(errors.begin(), errors.end(),
                                  [&](double err) { return err <= tol_deg; });
  return static_cast<double>(hits) / errors.size();
}

std::vector<PhasePoint> phase_sweep(const PhaseGrid& grid, const SweepConfig& config,
                                    std::uint64_t seed, int threads) {
  if (grid.models.empty() || grid.q_grid.empty() || grid.seeds <= 0)
    throw std::invalid_argument("phase_sweep: empty grid");

  struct Job {
    GraphModel model;
    double q;
  };
  std::vector<Job> jobs;
  for (const GraphModel& model : grid.models)
    for (double q : grid.q_grid) jobs.push_back({model, q});

  std::vector<PhasePoint> points(jobs.size());
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int idx = next.fetch_add(1); idx < static_cast<int>(jobs.size());
         idx = next.fetch_add(1)) {
      const Job& job = jobs[idx];
      PhasePoint point;
      point.kind = job.model.kind;
      point.n = job.model.n;
      point.p_or_r =
          job.model.kind == GraphKind::kErdosRenyi ? job.model.p : job.model.r;
      point.q = job.q;
      point.seeds = grid.seeds;
      for (int s = 0; s < grid.seeds; ++s) {
        TheoryInstanceConfig instance_config;
        instance_config.model = job.model;
        instance_config.q = job.q;
        instance_config.anchor_support = grid.anchor_support;
        instance_config.weak_support = grid.weak_support;
        instance_config.true_inlier_frac = grid.true_inlier_frac;
        instance_config.matches = grid.matches;
        instance_config.sigma_deg = config.sigma_deg;
        // Per-point stream so results do not depend on grid layout.
        instance_config.seed =
            StreamRng(seed, StreamKind::kEval, static_cast<std::uint64_t>(idx),
                      static_cast<std::uint64_t>(s))
                .next_u64();
        const TheoryInstance instance = gen_theory_instance(instance_config);
        const TriangleIndex tri = enumerate_triangles(instance.graph);

        std::vector<Direction> estimate;
        if (grid.sweeps == 0) {
          estimate = instance.init.directions;
        } else {
          SweepConfig point_config = config;
          point_config.k_max = grid.sweeps;
          point_config.seed = instance_config.seed;
          estimate =
              run(instance.graph, tri, instance.init, point_config).field.directions;
        }
        point.recovery += recovery_fraction(estimate, instance.truth, grid.tol_deg);
        point.mean_error_deg +=
            direction_error_stats(estimate, instance.truth).mean_deg;
      }
      point.recovery /= grid.seeds;
      point.mean_error_deg /= grid.seeds;
      points[idx] = point;
    }
  };

  threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return points;
}

int count_recovery_inversions(const std::vector<PhasePoint>& points) {
  int inversions = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].q > points[i - 1].q &&
        points[i].recovery > points[i - 1].recovery + 1e-12)
      ++inversions;
  return inversions;
}

std::string variant_name(AblationVariant variant) {
  switch (variant) {
    case AblationVariant::kInput: return "input";
    case AblationVariant::kPointOnly: return "point-only";
    case AblationVariant::kUniform: return "uniform";
    case AblationVariant::kStatic: return "static";
    case AblationVariant::kDynamic: return "dynamic";
  }
  return "unknown";
}

std::vector<AblationRow> ablation_run(const ViewGraph& graph, const TriangleIndex& tri,
                                      const SceneTruth& truth, const InitResult& init,
                                      const std::vector<AblationVariant>& variants,
                                      const SweepConfig& config, int threads) {
  std::vector<AblationRow> rows;
  rows.reserve(variants.size());
  for (AblationVariant variant : variants) {
    std::vector<Direction> estimate;
    if (variant == AblationVariant::kInput) {
      estimate = init.directions;
    } else {
      SweepConfig variant_config = config;
      switch (variant) {
        case AblationVariant::kPointOnly:
          variant_config.mode = WeightMode::kPointOnly;
          break;
        case AblationVariant::kUniform:
          variant_config.mode = WeightMode::kUniform;
          break;
        case AblationVariant::kStatic:
          variant_config.mode = WeightMode::kStatic;
          break;
        default:
          variant_config.mode = WeightMode::kDynamic;
      }
      estimate = run(graph, tri, init, variant_config, threads).field.directions;
    }
    rows.push_back({variant, direction_error_stats(estimate, truth)});
  }
  return rows;
}

}  // namespace tride
