#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "owl/planner/global.hpp"
#include "owl/planner/local.hpp"

namespace owl::planner {
namespace {

using mapping::OccupancyMap;
using mapping::TriState;
using test_oracles::force_state;

PlannerConfig test_config() {
  PlannerConfig cfg;
  cfg.local_box_min = Vec3(1.0, 1.0, 1.0);
  cfg.local_box_max = Vec3(30.0, 30.0, 10.0);
  cfg.gain_sensor.range = 3.0;
  cfg.gain_threshold_voxels = 10.0;
  cfg.frontier_threshold_voxels = 10.0;
  return cfg;
}

/// Free corridor [0, len_x) x [0, wy) x [0, wz) meters with Occupied walls,
/// Unknown beyond known_x.
OccupancyMap corridor_map(double len_x, double wy, double wz, double known_x) {
  const double e = 0.2;
  const Vec3i dims(static_cast<int>(len_x / e) + 2,
                   static_cast<int>(wy / e) + 2,
                   static_cast<int>(wz / e) + 2);
  OccupancyMap map(Vec3(-e, -e, -e), e, dims + Vec3i(1, 1, 1));
  Vec3i c;
  for (c.x() = 0; c.x() < map.dims().x(); ++c.x())
    for (c.y() = 0; c.y() < map.dims().y(); ++c.y())
      for (c.z() = 0; c.z() < map.dims().z(); ++c.z()) {
        const Vec3 center = map.cell_center(c);
        if (center.x() > known_x) continue;  // unexplored: stays Unknown
        const bool inside = center.x() > 0.0 && center.x() < len_x &&
                            center.y() > 0.0 && center.y() < wy &&
                            center.z() > 0.0 && center.z() < wz;
        force_state(map, c, inside ? TriState::Free : TriState::Occupied);
      }
  return map;
}

// --- compute_local_box ---

TEST(ComputeLocalBox, EmptyCloudYieldsMinExtents) {
  const auto cfg = test_config();
  const Vec3 robot(3.0, 4.0, 5.0);
  const Box box = compute_local_box({}, robot, cfg);
  for (int ax = 0; ax < 3; ++ax) {
    EXPECT_DOUBLE_EQ(box.hi[ax] - box.lo[ax], cfg.local_box_min[ax]);
    EXPECT_DOUBLE_EQ(0.5 * (box.hi[ax] + box.lo[ax]), robot[ax]);
  }
}

TEST(ComputeLocalBox, CorridorCloudClampsLateralToCorridorWidth) {
  auto cfg = test_config();
  // Synthetic corridor cloud: wall hits at y = +/-1.2 m, hits spread far
  // along x. Percentile oracle: the lateral 5th/95th percentiles sit on the
  // walls, so the lateral extent tracks the 2.4 m corridor width.
  std::vector<Vec3> cloud;
  RandomEngine rng(3);
  for (int k = 0; k < 2000; ++k) {
    const double x = rng.uniform(-20.0, 20.0);
    const double side = rng.uniform() < 0.5 ? -1.2 : 1.2;
    cloud.push_back(Vec3(x, side, rng.uniform(0.0, 2.0)));
  }
  const Vec3 robot(0.0, 0.0, 1.0);
  const Box box = compute_local_box(cloud, robot, cfg);
  EXPECT_NEAR(box.hi.y() - box.lo.y(), 2.4, 0.2 + 1e-9);
  EXPECT_DOUBLE_EQ(box.hi.x() - box.lo.x(), cfg.local_box_max.x());
}

TEST(ComputeLocalBox, SphericalCloudGivesNearCubicBox) {
  auto cfg = test_config();
  cfg.local_box_max = Vec3(30.0, 30.0, 30.0);
  std::vector<Vec3> cloud;
  RandomEngine rng(4);
  for (int k = 0; k < 5000; ++k) {
    const double az = rng.uniform(0.0, 2.0 * kPi);
    const double el = std::asin(rng.uniform(-1.0, 1.0));
    cloud.push_back(5.0 * Vec3(std::cos(el) * std::cos(az),
                               std::cos(el) * std::sin(az), std::sin(el)));
  }
  const Box box = compute_local_box(cloud, Vec3(0, 0, 0), cfg);
  const Vec3 extent = box.hi - box.lo;
  EXPECT_NEAR(extent.x(), extent.y(), 0.1 * extent.x());
  EXPECT_NEAR(extent.x(), extent.z(), 0.1 * extent.x());
}

// --- build_local_graph ---

TEST(BuildLocalGraph, OccupiedBoxKeepsOnlyRoot) {
  auto map = corridor_map(4.0, 2.0, 2.0, 100.0);
  // Occupy everything except the root's immediate neighborhood.
  Vec3i c;
  for (c.x() = 0; c.x() < map.dims().x(); ++c.x())
    for (c.y() = 0; c.y() < map.dims().y(); ++c.y())
      for (c.z() = 0; c.z() < map.dims().z(); ++c.z()) {
        const Vec3 p = map.cell_center(c);
        if ((p - Vec3(1.0, 1.0, 1.0)).norm() > 0.45)
          force_state(map, c, TriState::Occupied);
        else
          force_state(map, c, TriState::Free);
      }
  auto cfg = test_config();
  cfg.unknown_policy = vehicle::UnknownPolicy::Strict;
  cfg.num_samples = 100;
  RandomEngine rng(5);
  Box box{Vec3(0, 0, 0), Vec3(4, 2, 2)};
  const auto graph = build_local_graph(map, box, Vec3(1.0, 1.0, 1.0), cfg, rng);
  ASSERT_TRUE(graph.has_value());
  EXPECT_EQ(graph->vertex_count(), 1u);
  EXPECT_EQ(graph->root(), 0);
}

TEST(BuildLocalGraph, RootInOccupiedSpaceReportsBlocked) {
  auto map = corridor_map(4.0, 2.0, 2.0, 100.0);
  auto cfg = test_config();
  cfg.unknown_policy = vehicle::UnknownPolicy::Strict;
  RandomEngine rng(6);
  Box box{Vec3(0, 0, 0), Vec3(4, 2, 2)};
  // In the wall.
  EXPECT_FALSE(build_local_graph(map, box, Vec3(-0.1, -0.1, -0.1), cfg, rng)
                   .has_value());
}

TEST(BuildLocalGraph, CorridorChainSpansAndEdgesHold) {
  const auto map = corridor_map(10.0, 2.0, 2.0, 100.0);
  auto cfg = test_config();
  cfg.unknown_policy = vehicle::UnknownPolicy::Strict;
  cfg.num_samples = 200;
  RandomEngine rng(7);
  Box box{Vec3(0.2, 0.2, 0.2), Vec3(9.8, 1.8, 1.8)};
  const Vec3 root(0.5, 1.0, 1.0);
  const auto graph = build_local_graph(map, box, root, cfg, rng);
  ASSERT_TRUE(graph.has_value());
  ASSERT_GT(graph->vertex_count(), 20u);

  // Connected chain reaches at least 80% of the corridor length.
  double max_x = 0.0;
  for (const auto& v : graph->vertices()) max_x = std::max(max_x, v.position.x());
  EXPECT_GE(max_x, 0.8 * 10.0);

  // Post-hoc oracle: re-check every edge with a finer independent sweep.
  for (const auto& edge : graph->edges()) {
    const Vec3 a = graph->vertex(edge.a).position;
    const Vec3 b = graph->vertex(edge.b).position;
    const int steps = static_cast<int>(std::ceil((b - a).norm() / 0.02));
    for (int s = 0; s <= steps; ++s) {
      const Vec3 p = a + (b - a) * (static_cast<double>(s) / steps);
      ASSERT_TRUE(vehicle::cuboid_in_free_space(p, cfg.robot_cuboid, map,
                                                cfg.unknown_policy));
    }
    EXPECT_NEAR(edge.length, (a - b).norm(), 1e-12);
  }

  // Every vertex is reachable from the root.
  const auto tree = shortest_paths(*graph);
  for (const auto& v : graph->vertices()) EXPECT_TRUE(tree.reachable(v.id));
}

TEST(BuildLocalGraph, DeterministicForFixedSeed) {
  const auto map = corridor_map(10.0, 2.0, 2.0, 100.0);
  auto cfg = test_config();
  cfg.num_samples = 150;
  Box box{Vec3(0.2, 0.2, 0.2), Vec3(9.8, 1.8, 1.8)};
  const Vec3 root(0.5, 1.0, 1.0);
  RandomEngine rng1(11), rng2(11);
  const auto a = build_local_graph(map, box, root, cfg, rng1);
  const auto b = build_local_graph(map, box, root, cfg, rng2);
  ASSERT_TRUE(a && b);
  ASSERT_EQ(a->vertex_count(), b->vertex_count());
  ASSERT_EQ(a->edge_count(), b->edge_count());
  for (size_t i = 0; i < a->vertex_count(); ++i)
    EXPECT_EQ((a->vertex(i).position - b->vertex(i).position).norm(), 0.0);
}

// --- Dijkstra ---

TEST(ShortestPaths, SingleVertexTree) {
  ExplorationGraph g;
  g.add_vertex(Vec3(0, 0, 0));
  const auto tree = shortest_paths(g);
  EXPECT_DOUBLE_EQ(tree.dist[0], 0.0);
  EXPECT_EQ(tree.parent[0], -1);
  EXPECT_EQ(tree.leaves().size(), 1u);
}

TEST(ShortestPaths, RandomGraphsMatchBruteForce) {
  RandomEngine rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    ExplorationGraph g;
    const int n = 2 + static_cast<int>(rng.uniform_int(7));  // up to 8 vertices
    for (int i = 0; i < n; ++i)
      g.add_vertex(Vec3(rng.uniform(0, 10), rng.uniform(0, 10), 0.0));
    // Random edges plus a spanning chain for connectivity.
    for (int i = 1; i < n; ++i)
      g.add_edge(i - 1, i, (g.vertex(i - 1).position - g.vertex(i).position).norm());
    for (int k = 0; k < n; ++k) {
      const int a = static_cast<int>(rng.uniform_int(n));
      const int b = static_cast<int>(rng.uniform_int(n));
      if (a == b) continue;
      g.add_edge(a, b, (g.vertex(a).position - g.vertex(b).position).norm());
    }
    const auto tree = shortest_paths(g);
    const auto brute = test_oracles::brute_force_distances(g);
    for (int v = 0; v < n; ++v)
      ASSERT_EQ(tree.dist[v], brute[v]) << "trial " << trial << " vertex " << v;
  }
}

TEST(ShortestPaths, EqualRoutesPickSmallerParentId) {
  ExplorationGraph g;
  g.add_vertex(Vec3(0, 0, 0));  // 0 = root
  g.add_vertex(Vec3(1, 0, 0));  // 1
  g.add_vertex(Vec3(0, 1, 0));  // 2
  g.add_vertex(Vec3(1, 1, 0));  // 3
  g.add_edge(0, 2, 1.0);        // insert the larger-id route first
  g.add_edge(2, 3, 1.0);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 3, 1.0);
  const auto tree = shortest_paths(g);
  EXPECT_DOUBLE_EQ(tree.dist[3], 2.0);
  EXPECT_EQ(tree.parent[3], 1);
}

// --- gains ---

TEST(VolumetricGain, FullyFreeMapIsZero) {
  auto map = corridor_map(4.0, 4.0, 4.0, 100.0);
  const auto cfg = test_config();
  EXPECT_DOUBLE_EQ(volumetric_gain(Vec3(2.0, 2.0, 2.0), 0.0, map, cfg), 0.0);
}

TEST(VolumetricGain, FullyUnknownMatchesOracleAndScalesWithEpsilon) {
  const OccupancyMap map(Vec3(0, 0, 0), 0.2, Vec3i(20, 20, 20));
  auto cfg = test_config();
  cfg.gain_sensor.range = 1.8;
  const Vec3 vertex(2.0, 2.0, 2.0);
  const double g1 = volumetric_gain(vertex, 0.4, map, cfg);
  const size_t oracle = test_oracles::count_unknown_exhaustive(
      map, Pose{vertex, 0.4}, cfg.gain_sensor);
  EXPECT_DOUBLE_EQ(g1, static_cast<double>(oracle));
  EXPECT_GT(oracle, 0u);

  cfg.epsilon_g = 2.0;
  EXPECT_DOUBLE_EQ(volumetric_gain(vertex, 0.4, map, cfg), 2.0 * g1);
}

TEST(ExplorationGain, AccumulatesWithOptionalDiscount) {
  auto cfg = test_config();
  DijkstraTree tree;
  tree.source = 0;
  tree.parent = {-1, 0, 1};
  tree.dist = {0.0, 1.0, 2.0};
  const std::vector<int> path{0, 1, 2};

  std::vector<double> zero{0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(exploration_gain(path, zero, tree, cfg), 0.0);

  std::vector<double> gains{0.0, 2.0, 3.0};
  cfg.lambda_discount = 0.0;
  EXPECT_DOUBLE_EQ(exploration_gain(path, gains, tree, cfg), 5.0);

  cfg.lambda_discount = 0.5;
  const double expected = 2.0 * std::exp(-0.5) + 3.0 * std::exp(-1.0);
  EXPECT_DOUBLE_EQ(exploration_gain(path, gains, tree, cfg), expected);
  EXPECT_NEAR(expected, 2.317, 1e-3);
}

TEST(ClusterAndEvaluate, TinyRadiusEvaluatesEveryTarget) {
  ExplorationGraph g;
  for (int i = 0; i < 6; ++i) g.add_vertex(Vec3(i, 0, 0));
  auto cfg = test_config();
  cfg.rho = 1e-9;
  int evaluations = 0;
  cluster_and_evaluate(g, {0, 1, 2, 3, 4, 5}, cfg, [&](const GraphVertex& v) {
    ++evaluations;
    return 10.0 * v.id;
  });
  EXPECT_EQ(evaluations, 6);
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(g.vertex(i).volumetric_gain, 10.0 * i);
}

TEST(ClusterAndEvaluate, NearbyLeafAdoptsRepresentativeGain) {
  ExplorationGraph g;
  g.add_vertex(Vec3(0, 0, 0));
  g.add_vertex(Vec3(0.1, 0, 0));
  auto cfg = test_config();
  cfg.rho = 1.0;
  int evaluations = 0;
  cluster_and_evaluate(g, {0, 1}, cfg, [&](const GraphVertex&) {
    ++evaluations;
    return 42.0;
  });
  EXPECT_EQ(evaluations, 1);
  EXPECT_DOUBLE_EQ(g.vertex(0).volumetric_gain, 42.0);
  EXPECT_DOUBLE_EQ(g.vertex(1).volumetric_gain, 42.0);
  ASSERT_TRUE(g.vertex(1).cluster_rep.has_value());
  EXPECT_EQ(*g.vertex(1).cluster_rep, 0);
  EXPECT_LE((g.vertex(1).position - g.vertex(*g.vertex(1).cluster_rep).position)
                .norm(),
            cfg.rho);
}

TEST(ClusterAndEvaluate, ClusteringErrorReportedOnRandomMap) {
  // Clustered vs exact gains: measured and reported, not asserted (the
  // approximation has no spec bound).
  auto map = corridor_map(12.0, 2.4, 2.4, 6.0);
  auto cfg = test_config();
  RandomEngine rng(31);
  ExplorationGraph g;
  std::vector<int> ids;
  for (int i = 0; i < 30; ++i) {
    ids.push_back(g.add_vertex(Vec3(rng.uniform(0.5, 11.5), rng.uniform(0.5, 1.9),
                                    rng.uniform(0.5, 1.9))));
  }
  auto exact_gain = [&](const GraphVertex& v) {
    return volumetric_gain(v.position, 0.0, map, cfg);
  };
  ExplorationGraph clustered = g;
  cfg.rho = 1.5;
  cluster_and_evaluate(clustered, ids, cfg, exact_gain);
  double max_rel = 0.0;
  for (const int id : ids) {
    const double exact = exact_gain(g.vertex(id));
    const double approx = clustered.vertex(id).volumetric_gain;
    if (exact > 0.0)
      max_rel = std::max(max_rel, std::abs(approx - exact) / exact);
  }
  std::printf("[ INFO     ] clustering max relative gain error (rho=1.5): %.3f\n",
              max_rel);
  SUCCEED();
}

// --- plan_local ---

TEST(PlanLocal, FullyExploredMapReturnsNoGain) {
  const auto map = corridor_map(8.0, 2.0, 2.0, 100.0);  // fully known
  auto cfg = test_config();
  cfg.unknown_policy = vehicle::UnknownPolicy::Strict;
  RandomEngine rng(41);
  const auto result = plan_local(map, Vec3(1.0, 1.0, 1.0), {}, cfg, rng);
  EXPECT_EQ(result.status, PlanResult::Status::NoGain);
}

TEST(PlanLocal, CorridorEndpointApproachesUnknownBoundary) {
  // Known free for x < 6, unknown beyond: the best leaf must push toward the
  // boundary. Oracle: rebuild the same graph (same seed) and take the
  // exhaustive per-leaf argmax with identical tie-breaks.
  const auto map = corridor_map(12.0, 2.4, 2.4, 6.0);
  auto cfg = test_config();
  cfg.unknown_policy = vehicle::UnknownPolicy::Strict;
  cfg.rho = 1e-9;  // exact evaluation everywhere (oracle parity)
  cfg.num_samples = 250;
  cfg.gain_threshold_voxels = 5.0;
  const Vec3 robot(1.0, 1.2, 1.2);
  const std::vector<Vec3> cloud;  // min box still covers the corridor? no:
  // feed a synthetic aggregated cloud that opens the box to the whole corridor
  std::vector<Vec3> hits;
  for (double x = 0.0; x <= 12.0; x += 0.1) {
    hits.push_back(Vec3(x, 0.0, 1.2));
    hits.push_back(Vec3(x, 2.4, 1.2));
  }
  RandomEngine rng(55);
  const auto result = plan_local(map, robot, hits, cfg, rng);
  ASSERT_EQ(result.status, PlanResult::Status::Path);
  ASSERT_GE(result.waypoints.size(), 2u);
  const Vec3 endpoint = result.waypoints.back();
  EXPECT_GE(endpoint.x(), 6.0 - 2.0 * 1.0);  // within 2 rho_default of boundary

  // Exhaustive argmax oracle on the identically rebuilt graph.
  RandomEngine rng2(55);
  const Box box = compute_local_box(hits, robot, cfg);
  const auto graph = build_local_graph(map, box, robot, cfg, rng2);
  ASSERT_TRUE(graph.has_value());
  const auto tree = shortest_paths(*graph);
  int best_leaf = -1;
  double best_gain = -1.0, best_dist = 0.0;
  for (const int leaf : tree.leaves()) {
    const int parent = tree.parent[leaf];
    double yaw = 0.0;
    if (parent >= 0) {
      const Vec3 d = graph->vertex(leaf).position - graph->vertex(parent).position;
      if (std::hypot(d.x(), d.y()) > 1e-9) yaw = std::atan2(d.y(), d.x());
    }
    const double g =
        volumetric_gain(graph->vertex(leaf).position, yaw, map, cfg);
    if (g > best_gain || (g == best_gain && tree.dist[leaf] < best_dist)) {
      best_gain = g;
      best_dist = tree.dist[leaf];
      best_leaf = leaf;
    }
  }
  ASSERT_GE(best_leaf, 0);
  EXPECT_EQ(result.chosen_leaf, best_leaf);
  EXPECT_DOUBLE_EQ(result.gain, best_gain);
  // The safety step may move interior waypoints, never the endpoint.
  EXPECT_EQ((result.waypoints.back() - graph->vertex(best_leaf).position).norm(),
            0.0);
}

TEST(PlanLocal, SafetyStepNeverReducesMinimumClearance) {
  const auto map = corridor_map(12.0, 2.4, 2.4, 6.0);
  auto cfg = test_config();
  cfg.unknown_policy = vehicle::UnknownPolicy::Strict;
  cfg.num_samples = 250;
  cfg.gain_threshold_voxels = 5.0;
  const Vec3 robot(1.0, 1.2, 1.2);
  std::vector<Vec3> hits;
  for (double x = 0.0; x <= 12.0; x += 0.1) {
    hits.push_back(Vec3(x, 0.0, 1.2));
    hits.push_back(Vec3(x, 2.4, 1.2));
  }
  RandomEngine rng(56);
  const auto result = plan_local(map, robot, hits, cfg, rng);
  ASSERT_EQ(result.status, PlanResult::Status::Path);

  // Rebuild the raw (pre-safety) path identically.
  RandomEngine rng2(56);
  const Box box = compute_local_box(hits, robot, cfg);
  const auto graph = build_local_graph(map, box, robot, cfg, rng2);
  ASSERT_TRUE(graph.has_value());
  const auto tree = shortest_paths(*graph);
  const auto raw_path = tree.path_to(result.chosen_leaf);
  ASSERT_EQ(raw_path.size(), result.waypoints.size());

  auto min_clearance = [&](const std::vector<Vec3>& pts) {
    double worst = 1e9;
    for (size_t i = 1; i + 1 < pts.size(); ++i)
      worst = std::min(worst, clearance_to_occupied(pts[i], map,
                                                    cfg.safety_clearance_radius));
    return worst;
  };
  std::vector<Vec3> raw_positions;
  for (const int v : raw_path) raw_positions.push_back(graph->vertex(v).position);
  if (raw_positions.size() > 2)
    EXPECT_GE(min_clearance(result.waypoints) + 1e-12,
              min_clearance(raw_positions));
}

TEST(PlanLocal, ArgmaxInvariantUnderEpsilonScaling) {
  const auto map = corridor_map(12.0, 2.4, 2.4, 6.0);
  auto cfg = test_config();
  cfg.unknown_policy = vehicle::UnknownPolicy::Strict;
  cfg.num_samples = 200;
  cfg.gain_threshold_voxels = 5.0;
  const Vec3 robot(1.0, 1.2, 1.2);
  std::vector<Vec3> hits;
  for (double x = 0.0; x <= 12.0; x += 0.1) {
    hits.push_back(Vec3(x, 0.0, 1.2));
    hits.push_back(Vec3(x, 2.4, 1.2));
  }
  RandomEngine rng1(57), rng2(57);
  const auto a = plan_local(map, robot, hits, cfg, rng1);
  cfg.epsilon_g = 7.3;
  const auto b = plan_local(map, robot, hits, cfg, rng2);
  ASSERT_EQ(a.status, PlanResult::Status::Path);
  ASSERT_EQ(b.status, PlanResult::Status::Path);
  EXPECT_EQ(a.chosen_leaf, b.chosen_leaf);
  ASSERT_EQ(a.waypoints.size(), b.waypoints.size());
  for (size_t i = 0; i < a.waypoints.size(); ++i)
    EXPECT_EQ((a.waypoints[i] - b.waypoints[i]).norm(), 0.0);
}

// --- global layer ---

TEST(GlobalGraph, FirstUpdateAddsHomeRobotAndPath) {
  // Corridor known up to x = 6; a vertex near the boundary has real gain.
  const auto map = corridor_map(12.0, 2.4, 2.4, 6.0);
  GlobalGraph global(Vec3(1.0, 1.2, 1.2));
  auto cfg = test_config();

  PlanResult plan;
  plan.status = PlanResult::Status::Path;
  plan.waypoints = {Vec3(1.0, 1.2, 1.2), Vec3(3.0, 1.2, 1.2), Vec3(5.0, 1.2, 1.2)};
  plan.waypoint_gains = {0.0, 0.0,
                         volumetric_gain(Vec3(5.0, 1.2, 1.2), 0.0, map, cfg)};
  ASSERT_GT(plan.waypoint_gains[2], cfg.epsilon_g * cfg.frontier_threshold_voxels);
  const int robot_id =
      update_global_graph(global, plan, Vec3(1.0, 1.2, 1.2), map, cfg);
  // Home + two new path vertices (the first waypoint deduplicates onto home,
  // and the robot vertex deduplicates too).
  EXPECT_EQ(global.graph().vertex_count(), 3u);
  EXPECT_EQ(robot_id, 0);
  EXPECT_TRUE(global.graph().vertex(2).is_frontier);

  // Appending the identical path must not grow the graph.
  update_global_graph(global, plan, Vec3(1.0, 1.2, 1.2), map, cfg);
  EXPECT_EQ(global.graph().vertex_count(), 3u);

  // Home reachable from every vertex.
  const auto tree = dijkstra(global.graph().adjacency(), global.home_id());
  for (const auto& v : global.graph().vertices())
    EXPECT_TRUE(tree.reachable(v.id));
}

TEST(GlobalGraph, FrontierDemotedOnceRegionIsMapped) {
  auto map = corridor_map(12.0, 2.4, 2.4, 6.0);
  GlobalGraph global(Vec3(1.0, 1.2, 1.2));
  auto cfg = test_config();

  PlanResult plan;
  plan.status = PlanResult::Status::Path;
  plan.waypoints = {Vec3(1.0, 1.2, 1.2), Vec3(5.2, 1.2, 1.2)};
  plan.waypoint_gains = {0.0,
                         volumetric_gain(Vec3(5.2, 1.2, 1.2), 0.0, map, cfg)};
  update_global_graph(global, plan, Vec3(1.0, 1.2, 1.2), map, cfg);
  ASSERT_FALSE(global.frontier_ids().empty());

  // Map the remainder of the corridor; the recomputed gain collapses.
  Vec3i c;
  for (c.x() = 0; c.x() < map.dims().x(); ++c.x())
    for (c.y() = 0; c.y() < map.dims().y(); ++c.y())
      for (c.z() = 0; c.z() < map.dims().z(); ++c.z()) {
        const Vec3 center = map.cell_center(c);
        const bool inside = center.x() > 0.0 && center.x() < 12.0 &&
                            center.y() > 0.0 && center.y() < 2.4 &&
                            center.z() > 0.0 && center.z() < 2.4;
        force_state(map, c, inside ? TriState::Free : TriState::Occupied);
      }
  PlanResult nothing;
  update_global_graph(global, nothing, Vec3(5.0, 1.2, 1.2), map, cfg);
  EXPECT_TRUE(global.frontier_ids().empty());
}

TEST(PlanGlobalReposition, SelectionRules) {
  const auto map = corridor_map(30.0, 2.4, 2.4, 100.0);
  GlobalGraph global(Vec3(1.0, 1.2, 1.2));
  ExplorationGraph& g = global.graph();
  // Chain home(0) - a(1) - b(2): a near, b far.
  const int a = g.add_vertex(Vec3(5.0, 1.2, 1.2));
  g.add_edge(0, a, 4.0);
  const int b = g.add_vertex(Vec3(25.0, 1.2, 1.2));
  g.add_edge(a, b, 20.0);

  auto cfg = test_config();

  // No frontiers at all -> none found.
  auto none = plan_global_reposition(global, Vec3(1.0, 1.2, 1.2), 600.0, 1.0, cfg);
  EXPECT_FALSE(none.found);

  // Equal gain: the nearer frontier wins through the larger remaining time.
  g.vertex(a).is_frontier = true;
  g.vertex(a).volumetric_gain = 100.0;
  g.vertex(b).is_frontier = true;
  g.vertex(b).volumetric_gain = 100.0;
  auto nearer = plan_global_reposition(global, Vec3(1.0, 1.2, 1.2), 600.0, 1.0, cfg);
  ASSERT_TRUE(nearer.found);
  EXPECT_EQ(nearer.frontier_id, a);
  EXPECT_EQ((nearer.waypoints.back() - g.vertex(a).position).norm(), 0.0);

  // Infeasible frontier is excluded even with dominant gain: reaching b and
  // returning home takes 4 + 20 + 24 = 48 s.
  g.vertex(b).volumetric_gain = 1e9;
  auto feasible = plan_global_reposition(global, Vec3(1.0, 1.2, 1.2), 40.0, 1.0, cfg);
  ASSERT_TRUE(feasible.found);
  EXPECT_EQ(feasible.frontier_id, a);
}

TEST(CheckHoming, BoundaryIsInclusive) {
  const auto map = corridor_map(12.0, 2.4, 2.4, 100.0);
  GlobalGraph global(Vec3(1.0, 1.2, 1.2));
  ExplorationGraph& g = global.graph();
  const int far_v = g.add_vertex(Vec3(11.0, 1.2, 1.2));
  g.add_edge(0, far_v, 10.0);

  // Robot exactly at the far vertex: T_home = 10 s at 1 m/s.
  const Vec3 robot(11.0, 1.2, 1.2);
  // Plenty of endurance left -> Continue.
  auto cont = check_homing(global, robot, 0.0, 600.0, 1.0, 60.0);
  EXPECT_FALSE(cont.return_now);
  EXPECT_NEAR(cont.time_to_home, 10.0, 1e-9);

  // endurance - elapsed == T_home + margin exactly -> ReturnNow (inclusive).
  auto edge_case = check_homing(global, robot, 530.0, 600.0, 1.0, 60.0);
  EXPECT_TRUE(edge_case.return_now);
  ASSERT_FALSE(edge_case.waypoints.empty());
  EXPECT_EQ((edge_case.waypoints.back() - Vec3(1.0, 1.2, 1.2)).norm(), 0.0);

  // Robot stranded far from the graph -> inconsistency error.
  EXPECT_THROW(
      check_homing(global, Vec3(500.0, 500.0, 500.0), 0.0, 600.0, 1.0, 60.0),
      InvariantError);
}

}  // namespace
}  // namespace owl::planner
