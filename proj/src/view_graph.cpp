#include "tride/view_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace tride {

namespace {
std::int64_t pair_key(int i, int j, int n) {
  return static_cast<std::int64_t>(i) * n + j;
}
}  // namespace

ViewGraph::ViewGraph(int n_cameras, std::vector<EdgeKey> edges)
    : n_cameras_(n_cameras), edges_(std::move(edges)) {
  if (n_cameras < 0) throw std::invalid_argument("ViewGraph: negative camera count");
  index_.reserve(edges_.size());
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const auto [i, j] = edges_[e];
    if (i < 0 || j < 0 || i >= n_cameras_ || j >= n_cameras_)
      throw std::invalid_argument("ViewGraph: edge index out of range");
    if (i >= j) throw std::invalid_argument("ViewGraph: edge must satisfy i < j");
    if (!index_.emplace(pair_key(i, j, n_cameras_), e).second)
      throw std::invalid_argument("ViewGraph: duplicate edge");
  }
  evidence_.assign(edges_.size(), Eigen::Matrix3Xd(3, 0));
}

int ViewGraph::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto it = index_.find(pair_key(i, j, n_cameras_));
  return it == index_.end() ? -1 : it->second;
}

TriangleIndex enumerate_triangles(const ViewGraph& graph) {
  const int n = graph.n_cameras();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : graph.edges()) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  TriangleIndex index;
  index.incidence_.resize(graph.n_edges());
  // Each triangle is found once from its lexicographically smallest edge
  // (i, j) by intersecting the adjacency lists above j.
  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (j <= i) continue;
      auto it_i = std::upper_bound(adj[i].begin(), adj[i].end(), j);
      auto it_j = std::upper_bound(adj[j].begin(), adj[j].end(), j);
      while (it_i != adj[i].end() && it_j != adj[j].end()) {
        if (*it_i < *it_j) {
          ++it_i;
        } else if (*it_j < *it_i) {
          ++it_j;
        } else {
          const int k = *it_i;
          Triangle t;
          t.i = i;
          t.j = j;
          t.k = k;
          t.e_ij = graph.edge_index(i, j);
          t.e_jk = graph.edge_index(j, k);
          t.e_ik = graph.edge_index(i, k);
          index.triangles_.push_back(t);
          ++it_i;
          ++it_j;
        }
      }
    }
  }
  // The walk above emits triangles in lexicographic (i, j, k) order, so the
  // per-edge incidence lists below come out sorted by triangle id.
  for (int t = 0; t < static_cast<int>(index.triangles_.size()); ++t) {
    const Triangle& tr = index.triangles_[t];
    index.incidence_[tr.e_ij].push_back({t, tr.k, tr.e_ik, tr.e_jk});
    index.incidence_[tr.e_jk].push_back({t, tr.i, tr.e_ij, tr.e_ik});
    index.incidence_[tr.e_ik].push_back({t, tr.j, tr.e_ij, tr.e_jk});
  }
  return index;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + (values.size() - 1) / 2;
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

GraphStats graph_stats(const ViewGraph& graph, const TriangleIndex& tri) {
  GraphStats s;
  s.n_cameras = graph.n_cameras();
  s.n_edges = graph.n_edges();
  s.n_triangles = tri.n_triangles();

  std::vector<double> degree(graph.n_edges());
  std::vector<double> evidence_counts(graph.n_edges());
  int in_triangle = 0;
  for (int e = 0; e < graph.n_edges(); ++e) {
    degree[e] = static_cast<double>(tri.incident(e).size());
    evidence_counts[e] = static_cast<double>(graph.evidence(e).cols());
    if (!tri.incident(e).empty()) ++in_triangle;
  }
  s.median_incident_triangles = lower_median(degree);
  s.median_evidence = lower_median(evidence_counts);
  s.frac_edges_in_triangles =
      graph.n_edges() == 0 ? 0.0 : static_cast<double>(in_triangle) / graph.n_edges();
  return s;
}

}  // namespace tride
