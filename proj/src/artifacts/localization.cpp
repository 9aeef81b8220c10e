#include "owl/artifacts/localization.hpp"

#include <algorithm>
#include <vector>

namespace owl::artifacts {

namespace {

double median(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::optional<Vec3> localize_detection(const sensing::Detection& detection,
                                       const Pose& robot_pose,
                                       const sensing::CameraModel& camera,
                                       const mapping::OccupancyMap& map,
                                       int grid_n) {
  if (grid_n < 2) throw ConfigError("localize_detection: grid_n must be >= 2");
  const sensing::CameraFrame frame(robot_pose);
  const auto& bbox = detection.bbox;

  std::vector<double> xs, ys, zs;
  const int total = grid_n * grid_n;
  for (int gy = 0; gy < grid_n; ++gy) {
    for (int gx = 0; gx < grid_n; ++gx) {
      const double u =
          bbox.x0 + (gx + 0.5) * (bbox.x1 - bbox.x0) / static_cast<double>(grid_n);
      const double v =
          bbox.y0 + (gy + 0.5) * (bbox.y1 - bbox.y0) / static_cast<double>(grid_n);
      const Vec3 dir = frame.pixel_ray(camera, u, v);
      const auto hit = map.raycast(frame.origin, dir, camera.max_detect_range,
                                   mapping::StopAt::Occupied);
      if (!hit) continue;
      xs.push_back(hit->point.x());
      ys.push_back(hit->point.y());
      zs.push_back(hit->point.z());
    }
  }
  if (static_cast<int>(xs.size()) * 4 < total) return std::nullopt;
  return Vec3(median(xs), median(ys), median(zs));
}

}  // namespace owl::artifacts
