#pragma once

#include <memory>
#include <string>
#include <vector>

#include "owl/mission/config.hpp"
#include "owl/mission/scoring.hpp"

namespace owl::mission {

struct MissionMetrics {
  double travelled_distance = 0.0;
  double flight_time = 0.0;
  size_t explored_free_voxels = 0;   ///< map voxels classified Free at the end
  size_t reachable_air_voxels = 0;   ///< ground-truth reachable Air cells
  double explored_fraction = 0.0;    ///< observed fraction of reachable space
  int collision_count = 0;
  double max_impact_speed = 0.0;
  int planning_iterations = 0;
  int map_shifts = 0;
  ScoreResult artifact_score;
  bool homing_success = false;
  double final_distance_to_home = 0.0;
  bool success = false;
  std::string end_reason;
};

struct MissionResult {
  MissionMetrics metrics;
  std::vector<artifacts::ArtifactReport> vision_reports;
  std::vector<artifacts::ArtifactReport> bluetooth_reports;
  std::vector<world::GroundTruthArtifact> ground_truth;
};

/// Runs the full fixed-timestep mission loop. When `out_dir` is nonempty the
/// run writes trajectory.csv, planner_trace.jsonl, artifact_reports.jsonl,
/// bluetooth_reports.jsonl, metrics.json, world.owlworld and the map exports
/// there. Deterministic for a fixed config + master seed.
MissionResult run_mission(const MissionConfig& cfg, const std::string& out_dir);

/// Convenience wrapper for a pre-built world (the config's world source is
/// ignored). Used by tests that construct bespoke worlds.
MissionResult run_mission_on_world(const MissionConfig& cfg,
                                   const world::WorldGrid& world,
                                   const std::string& out_dir);

}  // namespace owl::mission
