#ifndef TRIDE_VIEW_GRAPH_HPP
#define TRIDE_VIEW_GRAPH_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "tride/geometry.hpp"

namespace tride {

struct EdgeKey {
  int i = 0;  // smaller camera index
  int j = 0;  // larger camera index
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

/// Undirected view graph over camera indices plus the per-edge evidence set
/// of correspondence normals. The edge list and evidence counts are fixed
/// once built; refinement never adds, removes, or reweights graph edges.
class ViewGraph {
 public:
  ViewGraph() = default;

  /// Throws std::invalid_argument on self-loops, duplicate edges, or
  /// indices outside [0, n_cameras).
  ViewGraph(int n_cameras, std::vector<EdgeKey> edges);

  int n_cameras() const { return n_cameras_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<EdgeKey>& edges() const { return edges_; }
  const EdgeKey& edge(int e) const { return edges_.at(e); }

  /// Edge id for the unordered pair {i, j}, or -1 when absent.
  int edge_index(int i, int j) const;

  /// Correspondence normals for edge e, one unit column per match.
  const Eigen::Matrix3Xd& evidence(int e) const { return evidence_.at(e); }
  void set_evidence(int e, Eigen::Matrix3Xd normals) {
    evidence_.at(e) = std::move(normals);
  }

 private:
  int n_cameras_ = 0;
  std::vector<EdgeKey> edges_;
  std::vector<Eigen::Matrix3Xd> evidence_;
  std::unordered_map<std::int64_t, int> index_;
};

/// One enumerated graph triangle i < j < k with its three edge ids.
struct Triangle {
  int i, j, k;
  int e_ij, e_jk, e_ik;
};

/// A triangle incident to some target edge, seen from that edge: the witness
/// camera and the ids of the two supporting edges that meet at it.
struct IncidentTriangle {
  int triangle = -1;
  int witness = -1;
  int edge_a = -1;  // edge (i, witness) for target edge (i, j)
  int edge_b = -1;  // edge (j, witness)
};

/// All graph triangles, lexicographic by (i, j, k), plus a per-edge incidence
/// list. Built once from the fixed edge list and immutable afterwards.
class TriangleIndex {
 public:
  int n_triangles() const { return static_cast<int>(triangles_.size()); }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  /// Incident triangles of an edge in ascending triangle id.
  /// Throws std::out_of_range for an invalid edge id.
  const std::vector<IncidentTriangle>& incident(int edge_id) const {
    return incidence_.at(edge_id);
  }

  friend TriangleIndex enumerate_triangles(const ViewGraph& graph);

 private:
  std::vector<Triangle> triangles_;
  std::vector<std::vector<IncidentTriangle>> incidence_;
};

/// Enumerates every triple of mutually adjacent cameras exactly once via
/// sorted adjacency intersection per edge.
TriangleIndex enumerate_triangles(const ViewGraph& graph);

/// Summary counts for a graph and its triangle context. Medians are lower
/// medians for even counts.
struct GraphStats {
  int n_cameras = 0;
  int n_edges = 0;
  int n_triangles = 0;
  double median_incident_triangles = 0.0;
  double frac_edges_in_triangles = 0.0;
  double median_evidence = 0.0;
};

GraphStats graph_stats(const ViewGraph& graph, const TriangleIndex& tri);

/// Lower median of an unsorted sample; 0 on empty input.
double lower_median(std::vector<double> values);

}  // namespace tride

#endif  // TRIDE_VIEW_GRAPH_HPP
