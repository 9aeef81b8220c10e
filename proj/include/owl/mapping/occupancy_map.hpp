#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "owl/grid_traversal.hpp"
#include "owl/sensing/point_cloud.hpp"
#include "owl/types.hpp"

namespace owl::mapping {

enum class TriState : uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

enum class StopAt : uint8_t { Occupied, NotFree };

/// Log-odds update and classification constants. Unwritten voxels hold 0,
/// which must classify as Unknown, hence l_free_thresh < 0 < l_occ_thresh.
struct OccupancyThresholds {
  double l_hit = 0.85;
  double l_miss = -0.4;
  double l_min = -2.0;
  double l_max = 3.5;
  double l_occ_thresh = 0.7;
  double l_free_thresh = -0.7;

  void validate() const;
};

/// Rolling-cuboid dimensions for maybe_shift_map.
struct MapBounds {
  Vec3 extent{40.0, 40.0, 20.0};
  double shift_margin = 5.0;

  void validate() const;
};

/// Sensor frustum used for volumetric gain counting.
struct GainSensorModel {
  double fov_azimuth_deg = 360.0;
  double fov_elevation_deg = 90.0;
  double range = 5.0;
};

/// The robot's occupancy map: a fixed-size voxel window over the world,
/// storing clamped log-odds. The window follows the robot via whole-voxel
/// shifts implemented with circular indexing, so a shift costs O(discarded
/// voxels) and retained voxels keep bit-identical values.
///
/// Writers (integrate/shift) must not run concurrently with queries; the
/// planner operates on the map between integrations and treats it as an
/// immutable snapshot.
class OccupancyMap {
 public:
  OccupancyMap(const Vec3& window_origin, double voxel_edge, const Vec3i& dims,
               const OccupancyThresholds& thresholds = {});

  double voxel_edge() const { return edge_; }
  const Vec3i& dims() const { return dims_; }
  const OccupancyThresholds& thresholds() const { return thresholds_; }

  /// World coordinates of the window's low corner / cuboid extent.
  Vec3 window_min() const { return anchor_ + edge_ * base_.cast<double>(); }
  Vec3 window_max() const {
    return window_min() + edge_ * dims_.cast<double>();
  }

  bool in_window(const Vec3i& cell) const {
    return cell.x() >= 0 && cell.y() >= 0 && cell.z() >= 0 &&
           cell.x() < dims_.x() && cell.y() < dims_.y() && cell.z() < dims_.z();
  }

  /// Window cell containing a world point (may be out of window).
  Vec3i world_to_cell(const Vec3& p) const {
    return point_to_cell(window_min(), edge_, p);
  }

  Vec3 cell_center(const Vec3i& cell) const {
    return window_min() + edge_ * (cell.cast<double>() + Vec3(0.5, 0.5, 0.5));
  }

  /// Log-odds of a window cell; out-of-window cells read as 0 (Unknown).
  float log_odds(const Vec3i& cell) const {
    if (!in_window(cell)) return 0.0f;
    return data_[storage_index(cell)];
  }

  TriState classify(float l) const {
    if (l >= static_cast<float>(thresholds_.l_occ_thresh)) return TriState::Occupied;
    if (l <= static_cast<float>(thresholds_.l_free_thresh)) return TriState::Free;
    return TriState::Unknown;
  }

  TriState state(const Vec3i& cell) const { return classify(log_odds(cell)); }
  TriState state_at(const Vec3& p) const { return state(world_to_cell(p)); }

  /// Applies one clamped log-odds increment to a window cell.
  void update_cell(const Vec3i& cell, double delta) {
    if (!in_window(cell)) return;
    float& l = data_[storage_index(cell)];
    l = std::min(static_cast<float>(thresholds_.l_max),
                 std::max(static_cast<float>(thresholds_.l_min),
                          l + static_cast<float>(delta)));
  }

  /// Shifts the window so the robot sits at least `margin` inside every
  /// face, in whole voxels along each violating face normal. Returns the
  /// applied shift in meters (zero if none).
  Vec3 maybe_shift(const Vec3& robot_pos, double margin);

  struct RayHit {
    Vec3i cell;       ///< window cell at the time of the call
    Vec3 point;       ///< entry-face point (== origin for a degenerate start)
    double range;
    TriState state;
  };

  /// First voxel along the ray meeting the stop predicate. Out-of-window
  /// voxels read as Unknown (they stop a NotFree ray, never an Occupied one).
  std::optional<RayHit> raycast(const Vec3& origin, const Vec3& dir,
                                double max_range, StopAt stop_at) const;

  /// Number of Unknown voxels whose center lies inside the sensor frustum at
  /// `viewpoint` and whose center is reachable by a map raycast that meets no
  /// Occupied voxel first. The viewpoint's own voxel counts when Unknown.
  size_t count_unknown_in_frustum(const Pose& viewpoint,
                                  const GainSensorModel& sensor) const;

  size_t count_state(TriState s) const;

  /// Visits every window cell (for exports); callback(cell, state).
  template <typename F>
  void for_each_cell(F&& f) const {
    for (int z = 0; z < dims_.z(); ++z)
      for (int y = 0; y < dims_.y(); ++y)
        for (int x = 0; x < dims_.x(); ++x) {
          const Vec3i c(x, y, z);
          f(c, state(c));
        }
  }

 private:
  size_t storage_index(const Vec3i& cell) const {
    const int sx = (cell.x() + ring_.x()) % dims_.x();
    const int sy = (cell.y() + ring_.y()) % dims_.y();
    const int sz = (cell.z() + ring_.z()) % dims_.z();
    return (static_cast<size_t>(sz) * dims_.y() + sy) * dims_.x() + sx;
  }

  void shift_axis(int ax, int cells);

  Vec3 anchor_;   ///< world position of the initial window origin
  Vec3i base_;    ///< current window origin, in voxels relative to anchor_
  Vec3i ring_;    ///< circular-buffer offset per axis
  double edge_;
  Vec3i dims_;
  OccupancyThresholds thresholds_;
  std::vector<float> data_;
};

/// Integrates one pose-associated scan: along each ray, traversed voxels
/// receive l_miss and the hit voxel receives l_hit; no-return rays mark free
/// space out to their max-range endpoint.
void integrate_scan(OccupancyMap& map, const sensing::PointCloud& cloud,
                    const Pose& pose);

/// Spec-level wrapper around OccupancyMap::maybe_shift.
Vec3 maybe_shift_map(OccupancyMap& map, const Vec3& robot_pos,
                     const MapBounds& bounds);

}  // namespace owl::mapping
