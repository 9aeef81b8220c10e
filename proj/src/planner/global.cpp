#include "owl/planner/global.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace owl::planner {

namespace {

/// Association radius for tying the robot's physical position to the graph.
double connect_radius(const PlannerConfig& cfg) {
  return std::max(2.0 * cfg.rho, cfg.edge_radius);
}

int find_or_add_vertex(GlobalGraph& global, const Vec3& pos, double gain,
                       const PlannerConfig& cfg) {
  ExplorationGraph& g = global.graph();
  int found = -1;
  double best = 0.5 * cfg.rho;
  for (const auto& v : g.vertices()) {
    const double d = (v.position - pos).norm();
    if (d <= best) {
      best = d;
      found = v.id;
    }
  }
  if (found >= 0) {
    // Refresh with the newer map's view of this spot.
    g.vertex(found).volumetric_gain = gain;
    return found;
  }
  const int id = g.add_vertex(pos);
  g.vertex(id).volumetric_gain = gain;
  return id;
}

void connect_new_vertex(GlobalGraph& global, int id,
                        const mapping::OccupancyMap& map,
                        const PlannerConfig& cfg,
                        std::optional<int> anchor_hint) {
  ExplorationGraph& g = global.graph();
  if (!g.adjacency()[id].empty()) return;
  const Vec3 pos = g.vertex(id).position;

  auto near = global.near_vertices(pos, 4.0 * connect_radius(cfg));
  int tried = 0;
  for (const int v : near) {
    if (v == id) continue;
    if (++tried > 5) break;
    if (vehicle::sweep_in_free_space(pos, g.vertex(v).position,
                                     cfg.robot_cuboid, map,
                                     cfg.unknown_policy)) {
      g.add_edge(id, v, (pos - g.vertex(v).position).norm());
      return;
    }
  }
  // The cuboid check can reject edges the robot physically flew (stale or
  // noisy map); fall back to the caller's anchor, then to the nearest vertex.
  int fallback = -1;
  if (anchor_hint && *anchor_hint != id)
    fallback = *anchor_hint;
  else
    for (const int v : near)
      if (v != id) {
        fallback = v;
        break;
      }
  if (fallback < 0 && id != global.home_id()) fallback = global.home_id();
  if (fallback >= 0)
    g.add_edge(id, fallback, (pos - g.vertex(fallback).position).norm());
}

}  // namespace

int GlobalGraph::nearest_vertex(const Vec3& p) const {
  int best_id = 0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : graph_.vertices()) {
    const double d = (v.position - p).norm();
    if (d < best) {
      best = d;
      best_id = v.id;
    }
  }
  return best_id;
}

std::vector<int> GlobalGraph::near_vertices(const Vec3& p, double radius) const {
  std::vector<std::pair<double, int>> hits;
  for (const auto& v : graph_.vertices()) {
    const double d = (v.position - p).norm();
    if (d <= radius) hits.emplace_back(d, v.id);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<int> out;
  out.reserve(hits.size());
  for (const auto& [d, id] : hits) out.push_back(id);
  return out;
}

int update_global_graph(GlobalGraph& global, const PlanResult& local_best,
                        const Vec3& robot_pos,
                        const mapping::OccupancyMap& map,
                        const PlannerConfig& cfg,
                        std::optional<int> anchor_hint) {
  ExplorationGraph& g = global.graph();

  // Append the winning local path, chaining consecutive vertices.
  if (local_best.status == PlanResult::Status::Path) {
    int prev = -1;
    for (size_t i = 0; i < local_best.waypoints.size(); ++i) {
      const int id = find_or_add_vertex(global, local_best.waypoints[i],
                                        local_best.waypoint_gains[i], cfg);
      if (prev >= 0 && prev != id) {
        bool linked = false;
        for (const auto& [u, w] : g.adjacency()[id])
          if (u == prev) linked = true;
        if (!linked)
          g.add_edge(prev, id,
                     (g.vertex(prev).position - g.vertex(id).position).norm());
      } else if (i == 0) {
        connect_new_vertex(global, id, map, cfg, anchor_hint);
      }
      prev = id;
    }
  }

  // Append (or refresh) the robot state vertex.
  const int robot_id = find_or_add_vertex(global, robot_pos, 0.0, cfg);
  connect_new_vertex(global, robot_id, map, cfg, anchor_hint);

  // Frontier flags, then re-check flagged vertices near the robot: the map
  // only changes within sensing range, so distant frontiers keep their gain.
  const double frontier_gain = cfg.epsilon_g * cfg.frontier_threshold_voxels;
  const double recheck_radius = cfg.gain_sensor.range + 20.0;
  for (size_t i = 0; i < g.vertex_count(); ++i) {
    GraphVertex& v = g.vertex(static_cast<int>(i));
    if (v.volumetric_gain > frontier_gain) v.is_frontier = true;
    if (v.is_frontier && (v.position - robot_pos).norm() <= recheck_radius) {
      v.volumetric_gain = volumetric_gain(v.position, 0.0, map, cfg);
      if (v.volumetric_gain <= frontier_gain) v.is_frontier = false;
    }
  }
  return robot_id;
}

RepositionResult plan_global_reposition(const GlobalGraph& global,
                                        const Vec3& robot_pos,
                                        double remaining_endurance,
                                        double nominal_speed,
                                        const PlannerConfig& cfg) {
  RepositionResult result;
  const ExplorationGraph& g = global.graph();
  const int anchor = global.nearest_vertex(robot_pos);
  const double to_anchor = (g.vertex(anchor).position - robot_pos).norm();

  const DijkstraTree from_robot = dijkstra(g.adjacency(), anchor);
  const DijkstraTree from_home = dijkstra(g.adjacency(), global.home_id());

  int best = -1;
  double best_score = 0.0;
  for (const int f : global.frontier_ids()) {
    if (!from_robot.reachable(f) || !from_home.reachable(f)) continue;
    const double t_reach = (to_anchor + from_robot.dist[f]) / nominal_speed;
    const double t_home = from_home.dist[f] / nominal_speed;
    const double t_remain = remaining_endurance - t_reach - t_home;
    if (t_remain <= 0.0) continue;
    const double score = g.vertex(f).volumetric_gain * t_remain;
    if (best < 0 || score > best_score) {
      best = f;
      best_score = score;
    }
  }
  if (best < 0) return result;

  result.found = true;
  result.frontier_id = best;
  result.score = best_score;
  result.waypoints.push_back(robot_pos);
  for (const int v : from_robot.path_to(best))
    result.waypoints.push_back(g.vertex(v).position);
  return result;
}

HomingDecision check_homing(const GlobalGraph& global, const Vec3& robot_pos,
                            double elapsed, double endurance,
                            double nominal_speed, double margin) {
  HomingDecision decision;
  const ExplorationGraph& g = global.graph();
  const int anchor = global.nearest_vertex(robot_pos);
  const double to_anchor = (g.vertex(anchor).position - robot_pos).norm();
  if (to_anchor > std::max(10.0, 4.0 * margin * nominal_speed))
    throw InvariantError(
        "check_homing: robot position not connectable to the global graph");

  const DijkstraTree from_anchor = dijkstra(g.adjacency(), anchor);
  if (!from_anchor.reachable(global.home_id()))
    throw InvariantError("check_homing: home unreachable from robot anchor");

  decision.time_to_home =
      (to_anchor + from_anchor.dist[global.home_id()]) / nominal_speed;
  decision.return_now =
      endurance - elapsed <= decision.time_to_home + margin;
  if (decision.return_now) {
    decision.waypoints.push_back(robot_pos);
    for (const int v : from_anchor.path_to(global.home_id()))
      decision.waypoints.push_back(g.vertex(v).position);
  }
  return decision;
}

}  // namespace owl::planner
