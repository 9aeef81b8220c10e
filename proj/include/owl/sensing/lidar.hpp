#pragma once

#include "owl/rng.hpp"
#include "owl/sensing/point_cloud.hpp"
#include "owl/world/world.hpp"

namespace owl::sensing {

/// Spinning LiDAR on a regular azimuth x elevation lattice. The beam lattice
/// is defined by native_channels; `channels` selects an evenly strided subset
/// of its rows, so a 32-of-64 scan reuses exactly half the 64-beam elevations.
struct LidarModel {
  double fov_azimuth_deg = 360.0;
  double fov_elevation_deg = 90.0;
  int channels = 64;
  int native_channels = 64;
  int azimuth_steps = 512;
  double max_range = 15.0;
  double rate_hz = 10.0;
  double range_noise_sigma = 0.0;

  void validate() const {
    if (fov_azimuth_deg <= 0.0 || fov_azimuth_deg > 360.0)
      throw ConfigError("lidar: fov_azimuth must be in (0, 360]");
    if (fov_elevation_deg <= 0.0 || fov_elevation_deg >= 180.0)
      throw ConfigError("lidar: fov_elevation must be in (0, 180)");
    if (channels < 1 || native_channels < channels ||
        native_channels % channels != 0)
      throw ConfigError("lidar: channels must divide native_channels");
    if (azimuth_steps < 1) throw ConfigError("lidar: azimuth_steps must be >= 1");
    if (max_range <= 0.0) throw ConfigError("lidar: max_range must be > 0");
  }

  /// Elevation of used row i (i in [0, channels)).
  double elevation_rad(int i) const {
    const int stride = native_channels / channels;
    const double span = deg2rad(fov_elevation_deg);
    return -span / 2.0 + (i * stride + 0.5) * span / native_channels;
  }

  double azimuth_rad(int j) const {
    const double span = deg2rad(fov_azimuth_deg);
    return -span / 2.0 + (j + 0.5) * span / azimuth_steps;
  }
};

/// Casts the full lattice against the ground-truth world. Points are in the
/// sensor frame; the first Solid cell along each ray yields a hit on its
/// entry face.
PointCloud scan_lidar(const world::WorldGrid& world, const Pose& pose,
                      const LidarModel& model, double stamp = 0.0,
                      RandomEngine* noise_rng = nullptr);

}  // namespace owl::sensing
