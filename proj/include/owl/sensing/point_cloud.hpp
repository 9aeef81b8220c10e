#pragma once

#include <vector>

#include "owl/types.hpp"

namespace owl::sensing {

/// One LiDAR sweep. Points are in the sensor frame; rays with no return
/// within max range carry the max-range endpoint and hit_mask false.
struct PointCloud {
  double stamp = 0.0;
  Pose origin_pose;
  std::vector<Vec3> points;
  std::vector<uint8_t> hit_mask;

  size_t size() const { return points.size(); }
};

}  // namespace owl::sensing
