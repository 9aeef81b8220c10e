#include "owl/sensing/lidar.hpp"

#include <cmath>

namespace owl::sensing {

PointCloud scan_lidar(const world::WorldGrid& world, const Pose& pose,
                      const LidarModel& model, double stamp,
                      RandomEngine* noise_rng) {
  model.validate();
  PointCloud cloud;
  cloud.stamp = stamp;
  cloud.origin_pose = pose;
  cloud.points.reserve(static_cast<size_t>(model.channels) * model.azimuth_steps);
  cloud.hit_mask.reserve(cloud.points.capacity());

  for (int i = 0; i < model.channels; ++i) {
    const double el = model.elevation_rad(i);
    const double ce = std::cos(el), se = std::sin(el);
    for (int j = 0; j < model.azimuth_steps; ++j) {
      const double az = model.azimuth_rad(j);
      const Vec3 dir_sensor(ce * std::cos(az), ce * std::sin(az), se);
      const Vec3 dir_world = yaw_rotate(pose.yaw, dir_sensor);
      const auto hit = world.raycast(pose.position, dir_world, model.max_range);
      if (hit) {
        double range = hit->range;
        if (noise_rng && model.range_noise_sigma > 0.0) {
          range += noise_rng->normal(0.0, model.range_noise_sigma);
          range = std::clamp(range, 0.0, model.max_range);
        }
        cloud.points.push_back(dir_sensor * range);
        cloud.hit_mask.push_back(1);
      } else {
        cloud.points.push_back(dir_sensor * model.max_range);
        cloud.hit_mask.push_back(0);
      }
    }
  }
  return cloud;
}

}  // namespace owl::sensing
