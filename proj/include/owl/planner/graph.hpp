#pragma once

#include <optional>
#include <vector>

#include "owl/types.hpp"

namespace owl::planner {

struct GraphVertex {
  int id = 0;
  Vec3 position{0.0, 0.0, 0.0};
  double volumetric_gain = 0.0;
  bool is_frontier = false;
  std::optional<int> cluster_rep;
};

struct GraphEdge {
  int a = 0;
  int b = 0;
  double length = 0.0;
};

/// Undirected sampled graph with contiguous vertex ids (id == index).
/// Edges are collision-free under the active cuboid policy at construction
/// time; the graph is connected from the root.
class ExplorationGraph {
 public:
  int add_vertex(const Vec3& position) {
    const int id = static_cast<int>(vertices_.size());
    vertices_.push_back(GraphVertex{id, position, 0.0, false, std::nullopt});
    adjacency_.emplace_back();
    return id;
  }

  void add_edge(int a, int b, double length) {
    edges_.push_back(GraphEdge{a, b, length});
    adjacency_[a].emplace_back(b, length);
    adjacency_[b].emplace_back(a, length);
  }

  size_t vertex_count() const { return vertices_.size(); }
  size_t edge_count() const { return edges_.size(); }

  GraphVertex& vertex(int id) { return vertices_[id]; }
  const GraphVertex& vertex(int id) const { return vertices_[id]; }
  const std::vector<GraphVertex>& vertices() const { return vertices_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::vector<std::pair<int, double>>>& adjacency() const {
    return adjacency_;
  }

  int root() const { return root_; }
  void set_root(int id) { root_ = id; }

 private:
  std::vector<GraphVertex> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
  int root_ = 0;
};

/// Shortest-path tree: parent pointers and distances from the source.
struct DijkstraTree {
  int source = 0;
  std::vector<int> parent;    ///< -1 for source/unreachable
  std::vector<double> dist;   ///< +inf for unreachable

  bool reachable(int v) const { return std::isfinite(dist[v]); }

  /// Vertex sequence source -> v (empty when unreachable).
  std::vector<int> path_to(int v) const;

  /// Tree leaves: reachable vertices that are nobody's parent. The source
  /// only counts when it is the sole vertex.
  std::vector<int> leaves() const;
};

DijkstraTree dijkstra(
    const std::vector<std::vector<std::pair<int, double>>>& adjacency,
    int source);

/// Exact shortest paths from the graph root, ties broken toward the parent
/// with the smaller vertex id.
DijkstraTree shortest_paths(const ExplorationGraph& graph);

}  // namespace owl::planner
