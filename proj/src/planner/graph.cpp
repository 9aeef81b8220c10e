#include "owl/planner/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace owl::planner {

std::vector<int> DijkstraTree::path_to(int v) const {
  std::vector<int> path;
  if (!reachable(v)) return path;
  for (int cur = v; cur != -1; cur = parent[cur]) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> DijkstraTree::leaves() const {
  std::vector<uint8_t> has_child(parent.size(), 0);
  for (size_t v = 0; v < parent.size(); ++v)
    if (parent[v] >= 0) has_child[parent[v]] = 1;
  std::vector<int> out;
  for (size_t v = 0; v < parent.size(); ++v) {
    if (!reachable(static_cast<int>(v)) || has_child[v]) continue;
    if (static_cast<int>(v) == source && parent.size() > 1) continue;
    out.push_back(static_cast<int>(v));
  }
  return out;
}

DijkstraTree dijkstra(
    const std::vector<std::vector<std::pair<int, double>>>& adjacency,
    int source) {
  const size_t n = adjacency.size();
  DijkstraTree tree;
  tree.source = source;
  tree.parent.assign(n, -1);
  tree.dist.assign(n, std::numeric_limits<double>::infinity());
  tree.dist[source] = 0.0;

  using Entry = std::pair<double, int>;  // (dist, id): id breaks ties
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  heap.emplace(0.0, source);
  std::vector<uint8_t> settled(n, 0);

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    for (const auto& [v, w] : adjacency[u]) {
      const double nd = d + w;
      if (nd < tree.dist[v]) {
        tree.dist[v] = nd;
        tree.parent[v] = u;
        heap.emplace(nd, v);
      } else if (nd == tree.dist[v] && tree.parent[v] >= 0 &&
                 u < tree.parent[v]) {
        tree.parent[v] = u;  // equal-length route through the smaller id
      }
    }
  }
  return tree;
}

DijkstraTree shortest_paths(const ExplorationGraph& graph) {
  return dijkstra(graph.adjacency(), graph.root());
}

}  // namespace owl::planner
