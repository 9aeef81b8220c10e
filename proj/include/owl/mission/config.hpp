#pragma once

#include <optional>
#include <string>

#include "owl/artifacts/hypothesis.hpp"
#include "owl/control/pid.hpp"
#include "owl/mapping/occupancy_map.hpp"
#include "owl/planner/local.hpp"
#include "owl/sensing/camera.hpp"
#include "owl/sensing/lidar.hpp"
#include "owl/sensing/odometry.hpp"
#include "owl/vehicle/vehicle.hpp"
#include "owl/world/tunnel.hpp"

namespace owl::mission {

struct WorldSource {
  enum class Kind { Generate, File } kind = Kind::Generate;
  world::TunnelSpec tunnel;
  std::optional<uint64_t> seed;  ///< defaults to a stream of the master seed
  std::string file;
};

struct MappingConfig {
  double voxel_edge = 0.2;
  /// Rolling cuboid extent; zero means "cover the whole world".
  Vec3 extent{0.0, 0.0, 0.0};
  double shift_margin = 2.0;
  double pad = 2.0;  ///< extra margin when covering the world, m
  mapping::OccupancyThresholds thresholds;
};

struct OutputConfig {
  bool dump_clouds = false;
  bool export_map = true;
};

struct MissionConfig {
  WorldSource world;
  double endurance_s = 600.0;
  double sim_dt = 0.01;
  uint64_t master_seed = 1;
  double takeoff_height = 0.6;

  sensing::LidarModel lidar;
  sensing::CameraModel camera;
  sensing::DetectionNoise detection_noise;
  sensing::OdomNoise odometry;
  double bluetooth_radius = 5.0;
  double bluetooth_rate_hz = 1.0;

  MappingConfig mapping;
  vehicle::RobotGeometry geometry;
  vehicle::VehicleConfig vehicle;
  control::ControllerConfig controller;
  planner::PlannerConfig planner;
  artifacts::HypothesisConfig hypotheses;
  int localization_grid_n = 5;

  double homing_margin_s = 60.0;
  double stall_timeout_s = 20.0;
  int aggregated_scans = 3;
  double scoring_tolerance = 2.0;

  OutputConfig outputs;

  /// Validates every sub-config and the tick-rate divisibility constraints.
  void validate() const;
};

/// Strict JSON loader: unknown keys and malformed values raise ConfigError.
MissionConfig load_mission_config(const std::string& path);
MissionConfig parse_mission_config(const std::string& json_text);

/// TunnelSpec JSON for the genworld CLI (same schema as world.tunnel).
world::TunnelSpec load_tunnel_spec(const std::string& path);

}  // namespace owl::mission
