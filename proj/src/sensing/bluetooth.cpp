#include "owl/sensing/bluetooth.hpp"

namespace owl::sensing {

std::vector<int> scan_bluetooth(const world::WorldGrid& world, const Pose& pose,
                                double radius) {
  if (radius <= 0.0) throw ConfigError("bluetooth: radius must be > 0");
  std::vector<int> ids;
  for (const auto& a : world.artifacts()) {
    if (!a.bluetooth) continue;
    if ((a.center - pose.position).norm() <= radius) ids.push_back(a.id);
  }
  return ids;
}

}  // namespace owl::sensing
