#include "owl/vehicle/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace owl::vehicle {

namespace {

/// Cells of the world grid the cuboid [min, max] penetrates with positive
/// depth (touching a face exactly does not count).
void penetrated_range(const world::WorldGrid& world, const Vec3& mn,
                      const Vec3& mx, Vec3i& lo, Vec3i& hi) {
  const double e = world.voxel_edge();
  const Vec3 o = world.origin();
  for (int ax = 0; ax < 3; ++ax) {
    lo[ax] = static_cast<int>(std::floor((mn[ax] - o[ax]) / e));
    hi[ax] = static_cast<int>(std::ceil((mx[ax] - o[ax]) / e)) - 1;
  }
}

/// Resolves penetration along one axis after the cuboid moved in direction
/// `move_sign` on that axis. Returns the corrected coordinate, or nothing if
/// there is no solid overlap.
struct AxisContact {
  double corrected;
  double face_normal_sign;  // normal points against the motion
};

std::optional<AxisContact> resolve_axis(const world::WorldGrid& world,
                                        const Vec3& center, const Vec3& half,
                                        int ax, double move_sign) {
  const Vec3 mn = center - half;
  const Vec3 mx = center + half;
  Vec3i lo, hi;
  penetrated_range(world, mn, mx, lo, hi);

  const double e = world.voxel_edge();
  const Vec3 o = world.origin();
  bool contact = false;
  int face_cell = 0;
  Vec3i c;
  for (c.x() = lo.x(); c.x() <= hi.x(); ++c.x())
    for (c.y() = lo.y(); c.y() <= hi.y(); ++c.y())
      for (c.z() = lo.z(); c.z() <= hi.z(); ++c.z()) {
        if (!world.is_solid_cell(c)) continue;
        if (!contact) {
          face_cell = c[ax];
          contact = true;
        } else {
          face_cell = move_sign > 0 ? std::min(face_cell, c[ax])
                                    : std::max(face_cell, c[ax]);
        }
      }
  if (!contact) return std::nullopt;
  AxisContact out;
  if (move_sign > 0) {
    out.corrected = o[ax] + face_cell * e - half[ax];
    out.face_normal_sign = -1.0;
  } else {
    out.corrected = o[ax] + (face_cell + 1) * e + half[ax];
    out.face_normal_sign = 1.0;
  }
  return out;
}

}  // namespace

RobotState step_dynamics(const RobotState& state, const Vec3& accel_cmd,
                         double yaw_rate_cmd, double dt,
                         const world::WorldGrid& world,
                         const RobotGeometry& geom, const VehicleConfig& cfg,
                         std::vector<CollisionEvent>* events) {
  if (!(dt > 0.0 && dt <= 0.1))
    throw InvariantError("step_dynamics: dt must be in (0, 0.1]");
  if (!accel_cmd.allFinite())
    throw InvariantError("step_dynamics: accel command is not finite");

  RobotState next = state;
  next.velocity += accel_cmd * dt;
  const double speed = next.velocity.norm();
  if (speed > cfg.max_speed) next.velocity *= cfg.max_speed / speed;
  next.yaw_rate = yaw_rate_cmd;
  next.yaw = wrap_angle(next.yaw + yaw_rate_cmd * dt);
  next.time = state.time + dt;

  const Vec3 half = geom.half();
  const double travel = next.velocity.norm() * dt;
  const double max_substep = 0.45 * world.voxel_edge();
  const int substeps =
      std::max(1, static_cast<int>(std::ceil(travel / max_substep)));
  const double h = dt / substeps;

  for (int s = 0; s < substeps; ++s) {
    for (int ax = 0; ax < 3; ++ax) {
      const double v = next.velocity[ax];
      if (v == 0.0) continue;
      next.position[ax] += v * h;
      const auto contact =
          resolve_axis(world, next.position, half, ax, v > 0 ? 1.0 : -1.0);
      if (contact) {
        next.position[ax] = contact->corrected;
        if (events && std::abs(v) > 1e-12) {
          CollisionEvent ev;
          ev.time = next.time;
          ev.position = next.position;
          ev.normal = Vec3(0, 0, 0);
          ev.normal[ax] = contact->face_normal_sign;
          ev.impact_speed = std::abs(v);
          events->push_back(ev);
        }
        next.velocity[ax] = 0.0;
      }
    }
  }
  return next;
}

void overlapped_voxels(const Vec3& center, const RobotGeometry& geom,
                       const mapping::OccupancyMap& map, Vec3i& lo, Vec3i& hi) {
  const Vec3 half = geom.half();
  lo = map.world_to_cell(center - half);
  hi = map.world_to_cell(center + half);
}

bool cuboid_in_free_space(const Vec3& center, const RobotGeometry& geom,
                          const mapping::OccupancyMap& map,
                          UnknownPolicy policy) {
  Vec3i lo, hi;
  overlapped_voxels(center, geom, map, lo, hi);
  Vec3i c;
  for (c.x() = lo.x(); c.x() <= hi.x(); ++c.x())
    for (c.y() = lo.y(); c.y() <= hi.y(); ++c.y())
      for (c.z() = lo.z(); c.z() <= hi.z(); ++c.z()) {
        const mapping::TriState s = map.state(c);
        if (s == mapping::TriState::Occupied) return false;
        if (s == mapping::TriState::Unknown && policy == UnknownPolicy::Strict)
          return false;
      }
  return true;
}

bool sweep_in_free_space(const Vec3& from, const Vec3& to,
                         const RobotGeometry& geom,
                         const mapping::OccupancyMap& map,
                         UnknownPolicy policy) {
  const double len = (to - from).norm();
  const double step = 0.5 * map.voxel_edge();
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= n; ++i) {
    const Vec3 p = from + (to - from) * (static_cast<double>(i) / n);
    if (!cuboid_in_free_space(p, geom, map, policy)) return false;
  }
  return true;
}

}  // namespace owl::vehicle
