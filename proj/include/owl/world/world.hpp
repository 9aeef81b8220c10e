#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "owl/grid_traversal.hpp"
#include "owl/types.hpp"

namespace owl::world {

enum class Cell : uint8_t { Solid = 0, Air = 1 };

enum class ArtifactClass : uint8_t {
  Survivor = 0,
  FireExtinguisher,
  Drill,
  Backpack,
  Vent,
  Helmet,
  Rope,
  Cellphone,
};

inline constexpr int kNumArtifactClasses = 8;

const char* artifact_class_name(ArtifactClass c);
std::optional<ArtifactClass> artifact_class_from_name(const std::string& name);

struct GroundTruthArtifact {
  int id = 0;
  ArtifactClass cls = ArtifactClass::Survivor;
  Vec3 center{0.0, 0.0, 0.0};
  bool bluetooth = false;
};

/// Ground-truth environment: a closed, static voxel grid of solid/air cells.
/// Immutable after construction; concurrent reads are safe.
class WorldGrid {
 public:
  WorldGrid(const Vec3& origin, double voxel_edge, const Vec3i& dims,
            std::vector<Cell> cells, std::vector<GroundTruthArtifact> artifacts,
            const Vec3i& start_cell);

  const Vec3& origin() const { return origin_; }
  double voxel_edge() const { return voxel_edge_; }
  const Vec3i& dims() const { return dims_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<GroundTruthArtifact>& artifacts() const { return artifacts_; }
  const Vec3i& start_cell() const { return start_cell_; }

  Vec3 start_position() const { return cell_center(start_cell_); }

  bool in_bounds(const Vec3i& c) const {
    return c.x() >= 0 && c.y() >= 0 && c.z() >= 0 && c.x() < dims_.x() &&
           c.y() < dims_.y() && c.z() < dims_.z();
  }

  size_t cell_index(const Vec3i& c) const {
    return (static_cast<size_t>(c.z()) * dims_.y() + c.y()) * dims_.x() + c.x();
  }

  Cell cell(const Vec3i& c) const { return cells_[cell_index(c)]; }

  /// Out-of-bounds cells count as Solid: worlds are closed, no ray escapes.
  bool is_solid_cell(const Vec3i& c) const {
    return !in_bounds(c) || cell(c) == Cell::Solid;
  }

  bool is_solid(const Vec3& point) const {
    return is_solid_cell(point_to_cell(origin_, voxel_edge_, point));
  }

  Vec3i point_cell(const Vec3& p) const {
    return point_to_cell(origin_, voxel_edge_, p);
  }

  Vec3 cell_center(const Vec3i& c) const {
    return origin_ + voxel_edge_ * (c.cast<double>() + Vec3(0.5, 0.5, 0.5));
  }

  /// First Solid cell along the ray, with the hit point on its entry face.
  /// Starting inside a Solid cell hits immediately at `start`.
  struct RayHit {
    Vec3i cell;
    Vec3 point;
    double range;
  };
  std::optional<RayHit> raycast(const Vec3& start, const Vec3& dir,
                                double max_range) const;

  /// Indices of Air cells 6-connected reachable from the start cell.
  std::vector<uint8_t> reachable_air_mask() const;
  size_t air_cell_count() const;

 private:
  Vec3 origin_;
  double voxel_edge_;
  Vec3i dims_;
  std::vector<Cell> cells_;
  std::vector<GroundTruthArtifact> artifacts_;
  Vec3i start_cell_;
};

}  // namespace owl::world
