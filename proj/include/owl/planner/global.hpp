#pragma once

#include <optional>
#include <vector>

#include "owl/planner/local.hpp"

namespace owl::planner {

/// Sparse global graph: home vertex, the robot's visited states, and the
/// high-gain local paths, with frontier bookkeeping. Home is vertex 0 and is
/// reachable from every vertex.
class GlobalGraph {
 public:
  explicit GlobalGraph(const Vec3& home_position) {
    graph_.add_vertex(home_position);
    graph_.set_root(0);
  }

  int home_id() const { return 0; }
  const ExplorationGraph& graph() const { return graph_; }
  ExplorationGraph& graph() { return graph_; }

  std::vector<int> frontier_ids() const {
    std::vector<int> out;
    for (const auto& v : graph_.vertices())
      if (v.is_frontier) out.push_back(v.id);
    return out;
  }

  /// Nearest vertex to a position (smallest id on ties).
  int nearest_vertex(const Vec3& p) const;

  /// Vertices within `radius` of p, ascending distance.
  std::vector<int> near_vertices(const Vec3& p, double radius) const;

 private:
  ExplorationGraph graph_;
};

/// Appends the best local path (deduplicated against existing vertices by
/// rho/2) and the robot state to the global graph, connecting new vertices by
/// collision-checked edges; flags/demotes frontiers against the current map.
/// `anchor_hint` is a vertex known to be reachable from the robot's physical
/// position (its previous state vertex); it backs up the collision-checked
/// connection when mapping noise blocks it. Returns the vertex id holding the
/// robot's current position.
int update_global_graph(GlobalGraph& global, const PlanResult& local_best,
                        const Vec3& robot_pos,
                        const mapping::OccupancyMap& map,
                        const PlannerConfig& cfg,
                        std::optional<int> anchor_hint = std::nullopt);

struct RepositionResult {
  bool found = false;
  int frontier_id = -1;
  double score = 0.0;
  std::vector<Vec3> waypoints;  ///< robot position, then graph chain to frontier
};

/// Frontier selection by gain x usable-time-after-reaching:
///   T_remain(f) = remaining_endurance - T_reach(f) - T_home(f);
/// frontiers with T_remain <= 0 are excluded; argmax gain * T_remain wins
/// (smaller id on ties). `found == false` means no feasible frontier.
RepositionResult plan_global_reposition(const GlobalGraph& global,
                                        const Vec3& robot_pos,
                                        double remaining_endurance,
                                        double nominal_speed,
                                        const PlannerConfig& cfg);

struct HomingDecision {
  bool return_now = false;
  double time_to_home = 0.0;
  std::vector<Vec3> waypoints;  ///< robot position, then graph chain to home
};

/// ReturnNow iff endurance - elapsed <= T_home + margin (inclusive).
/// Throws InvariantError when the robot cannot be associated with the graph.
HomingDecision check_homing(const GlobalGraph& global, const Vec3& robot_pos,
                            double elapsed, double endurance,
                            double nominal_speed, double margin);

}  // namespace owl::planner
