#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "owl/mapping/occupancy_map.hpp"
#include "owl/planner/graph.hpp"
#include "owl/rng.hpp"
#include "owl/vehicle/vehicle.hpp"

namespace owl::planner {

struct PlannerConfig {
  double epsilon_g = 1.0;            ///< gain weight, > 0
  double rho = 1.0;                  ///< leaf clustering radius, m
  int k_trigger = 3;                 ///< consecutive NoGain results before global
  double gain_threshold_voxels = 150.0;      ///< NoGain below eps_g * this
  double frontier_threshold_voxels = 100.0;  ///< frontier above eps_g * this
  Vec3 local_box_min{4.0, 4.0, 2.0};  ///< full extents, m
  Vec3 local_box_max{30.0, 30.0, 10.0};
  int num_samples = 300;
  double edge_radius = 2.0;
  vehicle::RobotGeometry robot_cuboid;
  vehicle::UnknownPolicy unknown_policy = vehicle::UnknownPolicy::Optimistic;
  bool leaf_only_gain = true;
  double lambda_discount = 0.0;
  mapping::GainSensorModel gain_sensor;
  double safety_clearance_radius = 1.2;  ///< clearance search radius, m

  void validate() const {
    if (epsilon_g <= 0.0) throw ConfigError("planner: epsilon_g must be > 0");
    if (rho <= 0.0) throw ConfigError("planner: rho must be > 0");
    if (k_trigger < 1) throw ConfigError("planner: k_trigger must be >= 1");
    if (num_samples < 1 || edge_radius <= 0.0)
      throw ConfigError("planner: num_samples/edge_radius invalid");
    for (int ax = 0; ax < 3; ++ax)
      if (local_box_min[ax] <= 0.0 || local_box_max[ax] < local_box_min[ax])
        throw ConfigError("planner: local box extents invalid");
    robot_cuboid.validate();
  }
};

struct Box {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{0.0, 0.0, 0.0};
};

/// Local sampling box centered on the robot: per-axis half-extent is the
/// clamped 5th-95th percentile span of the recent world-frame hit points.
Box compute_local_box(const std::vector<Vec3>& aggregated_hits,
                      const Vec3& robot_pos, const PlannerConfig& cfg);

/// Samples vertices in free space inside the box, connects them with
/// swept-cuboid-checked edges, and discards everything unreachable from the
/// root. Returns nullopt when the root itself fails the cuboid check
/// ("robot in non-free space"); callers may retry with the Optimistic policy.
std::optional<ExplorationGraph> build_local_graph(
    const mapping::OccupancyMap& map, const Box& box, const Vec3& robot_pos,
    const PlannerConfig& cfg, RandomEngine& rng);

/// VolumetricGain(v) = eps_g * |unknown voxels visible in the gain frustum|.
/// Yaw is the parent-to-vertex direction (irrelevant for a 360 deg sensor).
double volumetric_gain(const Vec3& position, double yaw,
                       const mapping::OccupancyMap& map,
                       const PlannerConfig& cfg);

/// Path gain: sum of vertex gains discounted by travel distance,
/// sum_i gain(v_i) * exp(-lambda * d(v_i)). lambda = 0 is the plain sum.
double exploration_gain(const std::vector<int>& path,
                        const std::vector<double>& vertex_gains,
                        const DijkstraTree& tree, const PlannerConfig& cfg);

/// Greedy gain clustering over `targets` in id order: a vertex within rho of
/// an already-evaluated representative adopts its gain, otherwise it is
/// evaluated exactly and becomes a representative. Writes volumetric_gain and
/// cluster_rep on the graph vertices.
void cluster_and_evaluate(ExplorationGraph& graph,
                          const std::vector<int>& targets,
                          const PlannerConfig& cfg,
                          const std::function<double(const GraphVertex&)>& evaluate);

struct PlanResult {
  enum class Status { Path, NoGain, RootBlocked } status = Status::NoGain;
  std::vector<Vec3> waypoints;          ///< root -> leaf, safety-improved
  std::vector<double> waypoint_gains;   ///< volumetric gain per waypoint vertex
  double gain = 0.0;                    ///< ExplorationGain of the chosen path
  int chosen_leaf = -1;
  size_t vertex_count = 0;
  size_t edge_count = 0;
};

/// Full local planning step: box -> graph -> Dijkstra -> leaf gains ->
/// argmax ExplorationGain (ties: shorter path, then smaller leaf id) ->
/// clearance-improving waypoint refinement. NoGain when the best gain falls
/// below eps_g * gain_threshold_voxels.
PlanResult plan_local(const mapping::OccupancyMap& map, const Vec3& robot_pos,
                      const std::vector<Vec3>& aggregated_hits,
                      const PlannerConfig& cfg, RandomEngine& rng);

/// Minimum distance from `p` to an Occupied voxel center within the
/// configured search radius (the radius itself when none is in range).
double clearance_to_occupied(const Vec3& p, const mapping::OccupancyMap& map,
                             double search_radius);

}  // namespace owl::planner
