#include "owl/mapping/occupancy_map.hpp"

#include <algorithm>
#include <cmath>

namespace owl::mapping {

void OccupancyThresholds::validate() const {
  if (l_free_thresh >= l_occ_thresh)
    throw ConfigError("occupancy thresholds: l_free_thresh must be < l_occ_thresh");
  if (!(l_free_thresh < 0.0 && 0.0 < l_occ_thresh))
    throw ConfigError(
        "occupancy thresholds: 0 must lie strictly between l_free_thresh and "
        "l_occ_thresh so unwritten voxels classify Unknown");
  if (l_min > l_max) throw ConfigError("occupancy thresholds: l_min > l_max");
  if (l_hit <= 0.0 || l_miss >= 0.0)
    throw ConfigError("occupancy thresholds: expect l_hit > 0 and l_miss < 0");
}

void MapBounds::validate() const {
  if (extent.minCoeff() <= 0.0) throw ConfigError("map bounds: extent must be positive");
  if (shift_margin < 0.0 || shift_margin >= extent.minCoeff() / 2.0)
    throw ConfigError("map bounds: shift_margin must be in [0, min(extent)/2)");
}

OccupancyMap::OccupancyMap(const Vec3& window_origin, double voxel_edge,
                           const Vec3i& dims,
                           const OccupancyThresholds& thresholds)
    : anchor_(window_origin),
      base_(0, 0, 0),
      ring_(0, 0, 0),
      edge_(voxel_edge),
      dims_(dims),
      thresholds_(thresholds) {
  if (edge_ <= 0.0) throw ConfigError("occupancy map: voxel_edge must be > 0");
  if (dims_.minCoeff() <= 0) throw ConfigError("occupancy map: dims must be positive");
  thresholds_.validate();
  data_.assign(static_cast<size_t>(dims_.x()) * dims_.y() * dims_.z(), 0.0f);
}

void OccupancyMap::shift_axis(int ax, int cells) {
  if (cells == 0) return;
  const int n = dims_[ax];
  base_[ax] += cells;
  if (std::abs(cells) >= n) {
    std::fill(data_.begin(), data_.end(), 0.0f);
    ring_ = Vec3i(0, 0, 0);
    return;
  }
  ring_[ax] = ((ring_[ax] + cells) % n + n) % n;
  // Clear the newly exposed window slice.
  int w_lo, w_hi;
  if (cells > 0) {
    w_lo = n - cells;
    w_hi = n - 1;
  } else {
    w_lo = 0;
    w_hi = -cells - 1;
  }
  Vec3i c;
  for (int w = w_lo; w <= w_hi; ++w) {
    c[ax] = w;
    const int bx = ax == 0 ? 1 : 0;
    const int by = ax == 2 ? 1 : 2;
    for (int i = 0; i < dims_[bx]; ++i) {
      c[bx] = i;
      for (int j = 0; j < dims_[by]; ++j) {
        c[by] = j;
        data_[storage_index(c)] = 0.0f;
      }
    }
  }
}

Vec3 OccupancyMap::maybe_shift(const Vec3& robot_pos, double margin) {
  Vec3 shift(0.0, 0.0, 0.0);
  const Vec3 lo = window_min();
  const Vec3 hi = window_max();
  for (int ax = 0; ax < 3; ++ax) {
    const double dist_lo = robot_pos[ax] - lo[ax];
    const double dist_hi = hi[ax] - robot_pos[ax];
    int cells = 0;
    if (dist_lo < margin) {
      cells = -static_cast<int>(std::ceil((margin - dist_lo) / edge_));
    } else if (dist_hi < margin) {
      cells = static_cast<int>(std::ceil((margin - dist_hi) / edge_));
    }
    if (cells != 0) {
      shift_axis(ax, cells);
      shift[ax] = cells * edge_;
    }
  }
  return shift;
}

std::optional<OccupancyMap::RayHit> OccupancyMap::raycast(
    const Vec3& origin, const Vec3& dir, double max_range,
    StopAt stop_at) const {
  std::optional<RayHit> hit;
  traverse_grid(window_min(), edge_, origin, dir, max_range,
                [&](const Vec3i& c, double t_entry) {
                  const TriState s = state(c);
                  const bool stop = stop_at == StopAt::Occupied
                                        ? s == TriState::Occupied
                                        : s != TriState::Free;
                  if (stop) {
                    hit = RayHit{c, origin + t_entry * dir, t_entry, s};
                    return false;
                  }
                  return true;
                });
  return hit;
}

size_t OccupancyMap::count_unknown_in_frustum(
    const Pose& viewpoint, const GainSensorModel& sensor) const {
  const Vec3 vp = viewpoint.position;
  const double half_el = deg2rad(sensor.fov_elevation_deg) / 2.0;
  const double half_az = deg2rad(sensor.fov_azimuth_deg) / 2.0;
  const bool full_azimuth = sensor.fov_azimuth_deg >= 360.0;

  const Vec3 wmin = window_min();
  // The elevation FOV caps how far the frustum reaches vertically.
  const double z_reach =
      sensor.fov_elevation_deg >= 180.0
          ? sensor.range
          : sensor.range * std::sin(half_el) + edge_;
  const Vec3 reach(sensor.range, sensor.range, z_reach);
  Vec3i lo = point_to_cell(wmin, edge_, vp - reach);
  Vec3i hi = point_to_cell(wmin, edge_, vp + reach);
  for (int ax = 0; ax < 3; ++ax) {
    lo[ax] = std::max(lo[ax], 0);
    hi[ax] = std::min(hi[ax], dims_[ax] - 1);
  }

  const Vec3i vp_cell = world_to_cell(vp);

  // Hot loop: precompute ring-buffer storage offsets per axis so the scan is
  // table lookups instead of per-cell modulo arithmetic.
  std::vector<int> sx(hi.x() - lo.x() + 1), sy(hi.y() - lo.y() + 1),
      sz(hi.z() - lo.z() + 1);
  for (int x = lo.x(); x <= hi.x(); ++x) sx[x - lo.x()] = (x + ring_.x()) % dims_.x();
  for (int y = lo.y(); y <= hi.y(); ++y) sy[y - lo.y()] = (y + ring_.y()) % dims_.y();
  for (int z = lo.z(); z <= hi.z(); ++z) sz[z - lo.z()] = (z + ring_.z()) % dims_.z();
  const float l_occ = static_cast<float>(thresholds_.l_occ_thresh);
  const float l_free = static_cast<float>(thresholds_.l_free_thresh);

  size_t count = 0;
  Vec3i c;
  for (c.z() = lo.z(); c.z() <= hi.z(); ++c.z()) {
    for (c.y() = lo.y(); c.y() <= hi.y(); ++c.y()) {
      const size_t row_base =
          (static_cast<size_t>(sz[c.z() - lo.z()]) * dims_.y() +
           sy[c.y() - lo.y()]) *
          dims_.x();
      for (c.x() = lo.x(); c.x() <= hi.x(); ++c.x()) {
        const float l = data_[row_base + sx[c.x() - lo.x()]];
        if (l >= l_occ || l <= l_free) continue;  // not Unknown
        const Vec3 center = cell_center(c);
        const Vec3 dv = center - vp;
        const double r = dv.norm();
        if (r > sensor.range) continue;
        if (!same_cell(c, vp_cell)) {
          const double elev = std::atan2(dv.z(), std::hypot(dv.x(), dv.y()));
          if (std::abs(elev) > half_el) continue;
          if (!full_azimuth) {
            const double az = wrap_angle(std::atan2(dv.y(), dv.x()) - viewpoint.yaw);
            if (std::abs(az) > half_az) continue;
          }
          // Center visibility: blocked iff any voxel strictly before the
          // target along the ray is Occupied.
          bool visible = false;
          traverse_grid(wmin, edge_, vp, dv, 1.0, [&](const Vec3i& cell, double) {
            if (same_cell(cell, c)) {
              visible = true;
              return false;
            }
            return state(cell) != TriState::Occupied;
          });
          if (!visible) continue;
        }
        ++count;
      }
    }
  }
  return count;
}

size_t OccupancyMap::count_state(TriState s) const {
  size_t n = 0;
  for (const float l : data_)
    if (classify(l) == s) ++n;
  return n;
}

void integrate_scan(OccupancyMap& map, const sensing::PointCloud& cloud,
                    const Pose& pose) {
  const Vec3 origin = pose.position;
  const double edge = map.voxel_edge();
  const OccupancyThresholds& th = map.thresholds();
  const Vec3 wmin = map.window_min();

  for (size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec3 endpoint = origin + yaw_rotate(pose.yaw, cloud.points[i]);
    const Vec3 delta = endpoint - origin;
    const double len = delta.norm();
    if (len <= 0.0) continue;

    if (cloud.hit_mask[i]) {
      // Hits land exactly on voxel faces; a nudge along the ray makes the
      // owning (solid-side) cell unambiguous.
      const Vec3 dir = delta / len;
      const Vec3i target = map.world_to_cell(endpoint + 1e-6 * dir);
      bool reached = false;
      traverse_grid(wmin, edge, origin, delta, 1.0 + 1e-5,
                    [&](const Vec3i& c, double) {
                      if (same_cell(c, target)) {
                        reached = true;
                        return false;
                      }
                      map.update_cell(c, th.l_miss);
                      return true;
                    });
      if (reached) map.update_cell(target, th.l_hit);
    } else {
      traverse_grid(wmin, edge, origin, delta, 1.0, [&](const Vec3i& c, double) {
        map.update_cell(c, th.l_miss);
        return true;
      });
    }
  }
}

Vec3 maybe_shift_map(OccupancyMap& map, const Vec3& robot_pos,
                     const MapBounds& bounds) {
  bounds.validate();
  return map.maybe_shift(robot_pos, bounds.shift_margin);
}

}  // namespace owl::mapping
