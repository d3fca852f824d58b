#include "tride/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace tride {

void SweepConfig::validate() const {
  if (!(sigma_deg > 0)) throw std::invalid_argument("SweepConfig: sigma must be > 0");
  if (beta < 0) throw std::invalid_argument("SweepConfig: beta must be >= 0");
  if (n_cand < 0) throw std::invalid_argument("SweepConfig: n_cand must be >= 0");
  if (!(a_min > 0)) throw std::invalid_argument("SweepConfig: a_min must be > 0");
  if (k_max < 1) throw std::invalid_argument("SweepConfig: k_max must be >= 1");
  if (tau_stop_deg < 0) throw std::invalid_argument("SweepConfig: tau_stop must be >= 0");
}

DirectionField make_field(const InitResult& init) {
  DirectionField field;
  field.directions = init.directions;
  field.badness = init.badness;
  field.sweep = 0;
  return field;
}

std::vector<Direction> build_candidate_pool(const Eigen::Matrix3Xd& evidence,
                                            const Direction& current, int n_cand,
                                            double a_min, StreamRng& rng) {
  std::vector<Direction> pool;
  pool.reserve(n_cand + 1);
  pool.push_back(current);
  const int n = static_cast<int>(evidence.cols());
  if (n < 2) return pool;
  for (int s = 0; s < n_cand; ++s) {
    const int r1 = rng.uniform_index(n);
    int r2 = rng.uniform_index(n - 1);
    if (r2 >= r1) ++r2;  // uniform over ordered pairs with r1 != r2
    const Eigen::Vector3d cross = evidence.col(r1).cross(evidence.col(r2));
    const double norm = cross.norm();
    if (norm <= a_min) continue;
    pool.push_back(canonicalize((cross / norm).eval()));
  }
  return pool;
}

std::optional<Direction> triangle_normal(const Direction& ga, const Direction& gb,
                                         double a_min) {
  const Eigen::Vector3d cross = ga.cross(gb);
  const double norm = cross.norm();
  if (norm <= a_min) return std::nullopt;
  return canonicalize((cross / norm).eval());
}

std::vector<double> triangle_weights(
    const std::vector<std::pair<double, double>>& badness_pairs, double beta) {
  if (badness_pairs.empty())
    throw std::invalid_argument("triangle_weights: empty badness list");
  std::vector<double> logits(badness_pairs.size());
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < badness_pairs.size(); ++t) {
    logits[t] = -beta * (badness_pairs[t].first + badness_pairs[t].second);
    max_logit = std::max(max_logit, logits[t]);
  }
  double total = 0.0;
  for (double& logit : logits) {
    logit = std::exp(logit - max_logit);
    total += logit;
  }
  for (double& w : logits) w /= total;
  return logits;
}

double score_candidate(const Direction& c, const std::vector<Direction>& normals,
                       const std::vector<double>& weights) {
  double score = 0.0;
  for (std::size_t t = 0; t < normals.size(); ++t)
    score += weights[t] * std::abs(c.dot(normals[t]));
  return score;
}

namespace {

// Deterministic slot-writing parallel loop; work items must not share state.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& worker : workers) worker.join();
}

struct EdgeOutcome {
  double move_deg = 0.0;
  bool changed = false;
  std::int64_t score_evals = 0;
};

}  // namespace

SweepResult sweep(const ViewGraph& graph, const TriangleIndex& tri,
                  const DirectionField& field, const SweepConfig& config,
                  const Eigen::VectorXd* frozen_badness, int threads) {
  config.validate();
  if (static_cast<int>(field.directions.size()) != graph.n_edges())
    throw InputMismatch("sweep: field size does not match graph");
  if (config.mode == WeightMode::kStatic && frozen_badness == nullptr)
    throw std::invalid_argument("sweep: static mode needs the frozen badness");

  const double sigma_rad = deg_to_rad(config.sigma_deg);
  const auto t0 = std::chrono::steady_clock::now();

  SweepResult out;
  out.field.directions.resize(graph.n_edges());
  out.field.badness.resize(graph.n_edges());
  out.field.sweep = field.sweep + 1;
  std::vector<EdgeOutcome> outcomes(graph.n_edges());

  parallel_for(graph.n_edges(), threads, [&](int e) {
    StreamRng rng(config.seed, StreamKind::kSweep,
                  static_cast<std::uint64_t>(field.sweep),
                  static_cast<std::uint64_t>(e));
    const Eigen::Matrix3Xd& evidence = graph.evidence(e);
    const Direction& current = field.directions[e];
    const std::vector<Direction> pool = build_candidate_pool(
        evidence, current, config.n_cand, config.a_min, rng);

    int selected = 0;
    bool carried_over = false;
    if (config.mode == WeightMode::kPointOnly) {
      // RANSAC-style edge-local selection: most supported candidate wins.
      double best = -1.0;
      for (std::size_t c = 0; c < pool.size(); ++c) {
        const double support = point_support(pool[c], evidence, sigma_rad);
        if (support > best) {
          best = support;
          selected = static_cast<int>(c);
        }
      }
    } else {
      std::vector<Direction> normals;
      std::vector<std::pair<double, double>> badness_pairs;
      for (const IncidentTriangle& inc : tri.incident(e)) {
        const auto normal = triangle_normal(field.directions[inc.edge_a],
                                            field.directions[inc.edge_b],
                                            config.a_min);
        if (!normal) continue;
        normals.push_back(*normal);
        switch (config.mode) {
          case WeightMode::kDynamic:
            badness_pairs.emplace_back(field.badness[inc.edge_a],
                                       field.badness[inc.edge_b]);
            break;
          case WeightMode::kStatic:
            badness_pairs.emplace_back((*frozen_badness)[inc.edge_a],
                                       (*frozen_badness)[inc.edge_b]);
            break;
          default:
            badness_pairs.emplace_back(0.0, 0.0);  // uniform
        }
      }
      if (normals.empty()) {
        carried_over = true;
      } else {
        const std::vector<double> weights = triangle_weights(badness_pairs, config.beta);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < pool.size(); ++c) {
          const double score = score_candidate(pool[c], normals, weights);
          if (score < best) {  // ties keep the lowest index, i.e. the incumbent
            best = score;
            selected = static_cast<int>(c);
          }
        }
        outcomes[e].score_evals =
            static_cast<std::int64_t>(pool.size()) * normals.size();
      }
    }

    if (carried_over) {
      out.field.directions[e] = current;
      out.field.badness[e] = field.badness[e];
    } else {
      out.field.directions[e] = pool[selected];
      out.field.badness[e] =
          1.0 - point_support(pool[selected], evidence, sigma_rad);
    }
    outcomes[e].move_deg = unoriented_angle_deg(out.field.directions[e], current);
    outcomes[e].changed = selected != 0;
  });

  std::vector<double> moves(graph.n_edges());
  for (int e = 0; e < graph.n_edges(); ++e) {
    moves[e] = outcomes[e].move_deg;
    out.stats.score_evals += outcomes[e].score_evals;
    if (outcomes[e].changed) ++out.stats.changed_edges;
  }
  out.stats.delta_deg = lower_median(std::move(moves));
  out.stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

RunResult run(const ViewGraph& graph, const TriangleIndex& tri,
              const InitResult& init, const SweepConfig& config, int threads) {
  config.validate();
  const Eigen::VectorXd frozen = init.badness;
  RunResult out;
  out.field = make_field(init);
  for (int t = 0; t < config.k_max; ++t) {
    SweepResult step = sweep(graph, tri, out.field, config, &frozen, threads);
    out.field = std::move(step.field);
    out.report.sweeps.push_back(step.stats);
    if (t >= 1 && step.stats.delta_deg < config.tau_stop_deg) break;
  }
  return out;
}

}  // namespace tride
