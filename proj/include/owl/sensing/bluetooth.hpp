#pragma once

#include <vector>

#include "owl/world/world.hpp"

namespace owl::sensing {

/// Ids of bluetooth-enabled artifacts within the closed Euclidean ball of
/// `radius` around the robot. Walls do not attenuate the scan.
std::vector<int> scan_bluetooth(const world::WorldGrid& world, const Pose& pose,
                                double radius);

}  // namespace owl::sensing
