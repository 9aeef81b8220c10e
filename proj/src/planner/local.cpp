#include "owl/planner/local.hpp"

#include <algorithm>
#include <cmath>

namespace owl::planner {

namespace {

double percentile(std::vector<double>& values, double q) {
  // Nearest-rank on the sorted sample; deterministic.
  std::sort(values.begin(), values.end());
  const size_t idx = static_cast<size_t>(
      std::min<double>(values.size() - 1.0,
                       std::max(0.0, std::ceil(q * values.size()) - 1.0)));
  return values[idx];
}

}  // namespace

Box compute_local_box(const std::vector<Vec3>& aggregated_hits,
                      const Vec3& robot_pos, const PlannerConfig& cfg) {
  Box box;
  for (int ax = 0; ax < 3; ++ax) {
    double half = cfg.local_box_min[ax] / 2.0;
    if (!aggregated_hits.empty()) {
      std::vector<double> coords;
      coords.reserve(aggregated_hits.size());
      for (const auto& p : aggregated_hits) coords.push_back(p[ax]);
      std::vector<double> lo_sample = coords;
      const double p05 = percentile(lo_sample, 0.05);
      const double p95 = percentile(coords, 0.95);
      const double span =
          std::max({p95 - robot_pos[ax], robot_pos[ax] - p05, 0.0});
      half = std::clamp(span, cfg.local_box_min[ax] / 2.0,
                        cfg.local_box_max[ax] / 2.0);
    }
    box.lo[ax] = robot_pos[ax] - half;
    box.hi[ax] = robot_pos[ax] + half;
  }
  return box;
}

std::optional<ExplorationGraph> build_local_graph(
    const mapping::OccupancyMap& map, const Box& box, const Vec3& robot_pos,
    const PlannerConfig& cfg, RandomEngine& rng) {
  if (!vehicle::cuboid_in_free_space(robot_pos, cfg.robot_cuboid, map,
                                     cfg.unknown_policy))
    return std::nullopt;

  // Sampled vertices, root first. Edges connect each kept sample to every
  // earlier kept vertex within edge_radius whose swept cuboid stays free.
  struct Candidate {
    Vec3 position;
    std::vector<std::pair<int, double>> links;
  };
  std::vector<Candidate> kept;
  kept.push_back(Candidate{robot_pos, {}});

  for (int s = 0; s < cfg.num_samples; ++s) {
    const Vec3 p = rng.uniform_in_box(box.lo, box.hi);
    if (!vehicle::cuboid_in_free_space(p, cfg.robot_cuboid, map,
                                       cfg.unknown_policy))
      continue;
    Candidate cand;
    cand.position = p;
    for (size_t v = 0; v < kept.size(); ++v) {
      const double len = (kept[v].position - p).norm();
      if (len > cfg.edge_radius || len < 1e-9) continue;
      if (vehicle::sweep_in_free_space(kept[v].position, p, cfg.robot_cuboid,
                                       map, cfg.unknown_policy))
        cand.links.emplace_back(static_cast<int>(v), len);
    }
    kept.push_back(std::move(cand));
  }

  // Connectivity filter: BFS from the root over candidate links, then
  // compact the surviving vertices into contiguous ids.
  std::vector<std::vector<std::pair<int, double>>> adj(kept.size());
  for (size_t v = 1; v < kept.size(); ++v)
    for (const auto& [u, len] : kept[v].links) {
      adj[v].emplace_back(u, len);
      adj[u].emplace_back(static_cast<int>(v), len);
    }
  std::vector<int> order{0};
  std::vector<uint8_t> seen(kept.size(), 0);
  seen[0] = 1;
  for (size_t head = 0; head < order.size(); ++head) {
    for (const auto& [u, len] : adj[order[head]]) {
      if (!seen[u]) {
        seen[u] = 1;
        order.push_back(u);
      }
    }
  }
  std::sort(order.begin(), order.end());  // preserve sampling order in ids

  std::vector<int> remap(kept.size(), -1);
  ExplorationGraph graph;
  for (const int old_id : order) remap[old_id] = graph.add_vertex(kept[old_id].position);
  for (const int old_id : order)
    for (const auto& [u, len] : kept[old_id].links)
      if (remap[u] >= 0) graph.add_edge(remap[u], remap[old_id], len);
  graph.set_root(0);
  return graph;
}

double volumetric_gain(const Vec3& position, double yaw,
                       const mapping::OccupancyMap& map,
                       const PlannerConfig& cfg) {
  const size_t unknown =
      map.count_unknown_in_frustum(Pose{position, yaw}, cfg.gain_sensor);
  return cfg.epsilon_g * static_cast<double>(unknown);
}

double exploration_gain(const std::vector<int>& path,
                        const std::vector<double>& vertex_gains,
                        const DijkstraTree& tree, const PlannerConfig& cfg) {
  double total = 0.0;
  for (const int v : path) {
    const double g = vertex_gains[v];
    if (g == 0.0) continue;
    total += cfg.lambda_discount == 0.0
                 ? g
                 : g * std::exp(-cfg.lambda_discount * tree.dist[v]);
  }
  return total;
}

void cluster_and_evaluate(
    ExplorationGraph& graph, const std::vector<int>& targets,
    const PlannerConfig& cfg,
    const std::function<double(const GraphVertex&)>& evaluate) {
  std::vector<int> ordered = targets;
  std::sort(ordered.begin(), ordered.end());
  std::vector<int> representatives;
  for (const int id : ordered) {
    GraphVertex& v = graph.vertex(id);
    int rep = -1;
    double best = cfg.rho;
    for (const int r : representatives) {
      const double d = (graph.vertex(r).position - v.position).norm();
      if (d <= best) {
        best = d;
        rep = r;
      }
    }
    if (rep >= 0) {
      v.volumetric_gain = graph.vertex(rep).volumetric_gain;
      v.cluster_rep = rep;
    } else {
      v.volumetric_gain = evaluate(v);
      v.cluster_rep = id;
      representatives.push_back(id);
    }
  }
}

double clearance_to_occupied(const Vec3& p, const mapping::OccupancyMap& map,
                             double search_radius) {
  const double e = map.voxel_edge();
  const Vec3i lo = map.world_to_cell(p - Vec3::Constant(search_radius));
  const Vec3i hi = map.world_to_cell(p + Vec3::Constant(search_radius));
  double best = search_radius;
  Vec3i c;
  for (c.x() = lo.x(); c.x() <= hi.x(); ++c.x())
    for (c.y() = lo.y(); c.y() <= hi.y(); ++c.y())
      for (c.z() = lo.z(); c.z() <= hi.z(); ++c.z()) {
        if (map.state(c) != mapping::TriState::Occupied) continue;
        best = std::min(best, (map.cell_center(c) - p).norm());
      }
  (void)e;
  return best;
}

namespace {

/// Clearance-maximizing local perturbation of interior waypoints. Only
/// strictly improving moves that keep both adjacent edges collision-free are
/// accepted, so the minimum path clearance never decreases.
void improve_path_safety(std::vector<Vec3>& waypoints,
                         const mapping::OccupancyMap& map,
                         const PlannerConfig& cfg) {
  if (waypoints.size() < 3) return;
  static const Vec3 dirs[14] = {
      {1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0}, {0, 0, 1},  {0, 0, -1},
      {1, 1, 1},  {1, 1, -1}, {1, -1, 1}, {1, -1, -1},
      {-1, 1, 1}, {-1, 1, -1}, {-1, -1, 1}, {-1, -1, -1}};
  const double radii[2] = {0.25 * cfg.edge_radius, 0.5 * cfg.edge_radius};

  for (size_t i = 1; i + 1 < waypoints.size(); ++i) {
    double best_clear =
        clearance_to_occupied(waypoints[i], map, cfg.safety_clearance_radius);
    Vec3 best_pos = waypoints[i];
    for (const double r : radii) {
      for (const auto& d : dirs) {
        const Vec3 q = waypoints[i] + r * d.normalized();
        const double c = clearance_to_occupied(q, map, cfg.safety_clearance_radius);
        if (c <= best_clear) continue;
        if (!vehicle::cuboid_in_free_space(q, cfg.robot_cuboid, map,
                                           cfg.unknown_policy))
          continue;
        if (!vehicle::sweep_in_free_space(waypoints[i - 1], q, cfg.robot_cuboid,
                                          map, cfg.unknown_policy) ||
            !vehicle::sweep_in_free_space(q, waypoints[i + 1], cfg.robot_cuboid,
                                          map, cfg.unknown_policy))
          continue;
        best_clear = c;
        best_pos = q;
      }
    }
    waypoints[i] = best_pos;
  }
}

}  // namespace

PlanResult plan_local(const mapping::OccupancyMap& map, const Vec3& robot_pos,
                      const std::vector<Vec3>& aggregated_hits,
                      const PlannerConfig& cfg, RandomEngine& rng) {
  cfg.validate();
  PlanResult result;

  const Box box = compute_local_box(aggregated_hits, robot_pos, cfg);
  auto graph_opt = build_local_graph(map, box, robot_pos, cfg, rng);
  if (!graph_opt) {
    result.status = PlanResult::Status::RootBlocked;
    return result;
  }
  ExplorationGraph& graph = *graph_opt;
  result.vertex_count = graph.vertex_count();
  result.edge_count = graph.edge_count();

  const DijkstraTree tree = shortest_paths(graph);

  std::vector<int> targets;
  if (cfg.leaf_only_gain) {
    targets = tree.leaves();
  } else {
    for (const auto& v : graph.vertices())
      if (tree.reachable(v.id)) targets.push_back(v.id);
  }
  if (targets.empty()) {
    result.status = PlanResult::Status::NoGain;
    return result;
  }

  cluster_and_evaluate(graph, targets, cfg, [&](const GraphVertex& v) {
    const int parent = tree.parent[v.id];
    double yaw = 0.0;
    if (parent >= 0) {
      const Vec3 d = v.position - graph.vertex(parent).position;
      if (std::hypot(d.x(), d.y()) > 1e-9) yaw = std::atan2(d.y(), d.x());
    }
    return volumetric_gain(v.position, yaw, map, cfg);
  });

  std::vector<double> gains(graph.vertex_count(), 0.0);
  for (const auto& v : graph.vertices()) gains[v.id] = v.volumetric_gain;

  // argmax ExplorationGain over leaf paths; ties prefer the shorter path,
  // then the smaller leaf id.
  int best_leaf = -1;
  double best_gain = -1.0;
  double best_dist = 0.0;
  const std::vector<int> leaves = cfg.leaf_only_gain ? targets : tree.leaves();
  for (const int leaf : leaves) {
    const auto path = tree.path_to(leaf);
    if (path.empty()) continue;
    const double g = exploration_gain(path, gains, tree, cfg);
    const double d = tree.dist[leaf];
    if (g > best_gain || (g == best_gain && d < best_dist)) {
      best_gain = g;
      best_dist = d;
      best_leaf = leaf;
    }
  }

  if (best_leaf < 0 || best_gain < cfg.epsilon_g * cfg.gain_threshold_voxels) {
    result.status = PlanResult::Status::NoGain;
    return result;
  }

  result.status = PlanResult::Status::Path;
  result.gain = best_gain;
  result.chosen_leaf = best_leaf;
  for (const int v : tree.path_to(best_leaf)) {
    result.waypoints.push_back(graph.vertex(v).position);
    result.waypoint_gains.push_back(gains[v]);
  }
  improve_path_safety(result.waypoints, map, cfg);
  return result;
}

}  // namespace owl::planner
