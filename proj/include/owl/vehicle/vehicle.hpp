#pragma once

#include <vector>

#include "owl/mapping/occupancy_map.hpp"
#include "owl/types.hpp"
#include "owl/world/world.hpp"

namespace owl::vehicle {

struct RobotState {
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 velocity{0.0, 0.0, 0.0};
  double yaw = 0.0;       ///< normalized to (-pi, pi]
  double yaw_rate = 0.0;
  double time = 0.0;

  Pose pose() const { return Pose{position, yaw}; }
};

/// Full cuboid extents (L x W x H), axis-aligned in the world frame.
struct RobotGeometry {
  Vec3 cuboid_extent{0.38, 0.38, 0.24};

  Vec3 half() const { return cuboid_extent / 2.0; }
  void validate() const {
    if (cuboid_extent.minCoeff() <= 0.0)
      throw ConfigError("robot geometry: extents must be positive");
  }
};

struct CollisionEvent {
  double time = 0.0;
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 normal{0.0, 0.0, 0.0};  ///< unit, pointing out of the wall
  double impact_speed = 0.0;

};

struct VehicleConfig {
  double max_speed = 1.0;              ///< m/s, velocity clamp per step
  double penetration_tolerance = 1e-6; ///< m
};

/// Semi-implicit Euler step with collision-tolerant sliding contact.
/// Collisions are events, not errors: the position is projected out along
/// the face normal and the normal velocity component is zeroed. Substeps
/// limit travel to half a world voxel to prevent tunneling.
RobotState step_dynamics(const RobotState& state, const Vec3& accel_cmd,
                         double yaw_rate_cmd, double dt,
                         const world::WorldGrid& world,
                         const RobotGeometry& geom, const VehicleConfig& cfg,
                         std::vector<CollisionEvent>* events);

enum class UnknownPolicy { Strict, Optimistic };

/// Inclusive set of map voxels the cuboid overlaps; touching a voxel face
/// counts, so the checked volume over-approximates the cuboid.
void overlapped_voxels(const Vec3& center, const RobotGeometry& geom,
                       const mapping::OccupancyMap& map, Vec3i& lo, Vec3i& hi);

/// True iff every overlapped voxel is Free (Strict) or Free-or-Unknown
/// (Optimistic). Voxels outside the map window read as Unknown.
bool cuboid_in_free_space(const Vec3& center, const RobotGeometry& geom,
                          const mapping::OccupancyMap& map,
                          UnknownPolicy policy);

/// Swept-edge check: samples cuboid placements along the segment at half-voxel
/// spacing (endpoints included).
bool sweep_in_free_space(const Vec3& from, const Vec3& to,
                         const RobotGeometry& geom,
                         const mapping::OccupancyMap& map,
                         UnknownPolicy policy);

}  // namespace owl::vehicle
