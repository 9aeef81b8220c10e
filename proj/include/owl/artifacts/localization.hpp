#pragma once

#include <optional>

#include "owl/mapping/occupancy_map.hpp"
#include "owl/sensing/camera.hpp"

namespace owl::artifacts {

/// Bounding-box localization: the bbox is sampled on a grid_n x grid_n pixel
/// lattice, each pixel's ray is cast into the occupancy map (stop at
/// Occupied, camera range), and the per-coordinate median of the hit points
/// is the estimate. Returns nullopt (NoReturn) when fewer than a quarter of
/// the rays hit.
std::optional<Vec3> localize_detection(const sensing::Detection& detection,
                                       const Pose& robot_pose,
                                       const sensing::CameraModel& camera,
                                       const mapping::OccupancyMap& map,
                                       int grid_n = 5);

}  // namespace owl::artifacts
