#include "owl/world/world.hpp"

#include <deque>

namespace owl::world {

namespace {
constexpr std::array<const char*, kNumArtifactClasses> kClassNames = {
    "survivor", "fire_extinguisher", "drill", "backpack",
    "vent",     "helmet",            "rope",  "cellphone"};
}  // namespace

const char* artifact_class_name(ArtifactClass c) {
  return kClassNames[static_cast<size_t>(c)];
}

std::optional<ArtifactClass> artifact_class_from_name(const std::string& name) {
  for (size_t i = 0; i < kClassNames.size(); ++i) {
    if (name == kClassNames[i]) return static_cast<ArtifactClass>(i);
  }
  return std::nullopt;
}

WorldGrid::WorldGrid(const Vec3& origin, double voxel_edge, const Vec3i& dims,
                     std::vector<Cell> cells,
                     std::vector<GroundTruthArtifact> artifacts,
                     const Vec3i& start_cell)
    : origin_(origin),
      voxel_edge_(voxel_edge),
      dims_(dims),
      cells_(std::move(cells)),
      artifacts_(std::move(artifacts)),
      start_cell_(start_cell) {
  if (voxel_edge_ <= 0.0) throw ParseError("world: voxel_edge must be > 0");
  if (dims_.x() <= 0 || dims_.y() <= 0 || dims_.z() <= 0)
    throw ParseError("world: dims must be positive");
  const size_t expected = static_cast<size_t>(dims_.x()) * dims_.y() * dims_.z();
  if (cells_.size() != expected)
    throw ParseError("world: cell payload size " + std::to_string(cells_.size()) +
                     " does not match dims product " + std::to_string(expected));
  // Closed-world invariant: the boundary shell must be Solid.
  auto check_shell = [&](int x, int y, int z) {
    if (cell(Vec3i(x, y, z)) != Cell::Solid)
      throw ParseError("world: boundary shell is not Solid at (" +
                       std::to_string(x) + "," + std::to_string(y) + "," +
                       std::to_string(z) + ")");
  };
  for (int z = 0; z < dims_.z(); ++z) {
    for (int y = 0; y < dims_.y(); ++y) {
      check_shell(0, y, z);
      check_shell(dims_.x() - 1, y, z);
    }
  }
  for (int z = 0; z < dims_.z(); ++z) {
    for (int x = 0; x < dims_.x(); ++x) {
      check_shell(x, 0, z);
      check_shell(x, dims_.y() - 1, z);
    }
  }
  for (int y = 0; y < dims_.y(); ++y) {
    for (int x = 0; x < dims_.x(); ++x) {
      check_shell(x, y, 0);
      check_shell(x, y, dims_.z() - 1);
    }
  }
  for (const auto& a : artifacts_) {
    if (is_solid(a.center))
      throw ParseError("world: artifact " + std::to_string(a.id) +
                       " center lies inside a Solid cell");
  }
  if (!in_bounds(start_cell_) || cell(start_cell_) != Cell::Air)
    throw ParseError("world: start cell is not an Air cell");
}

std::optional<WorldGrid::RayHit> WorldGrid::raycast(const Vec3& start,
                                                    const Vec3& dir,
                                                    double max_range) const {
  std::optional<RayHit> hit;
  traverse_grid(origin_, voxel_edge_, start, dir, max_range,
                [&](const Vec3i& c, double t_entry) {
                  if (is_solid_cell(c)) {
                    hit = RayHit{c, start + t_entry * dir, t_entry};
                    return false;
                  }
                  return true;
                });
  return hit;
}

std::vector<uint8_t> WorldGrid::reachable_air_mask() const {
  std::vector<uint8_t> mask(cells_.size(), 0);
  if (cell(start_cell_) != Cell::Air) return mask;
  std::deque<Vec3i> queue{start_cell_};
  mask[cell_index(start_cell_)] = 1;
  const Vec3i steps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                          {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!queue.empty()) {
    const Vec3i c = queue.front();
    queue.pop_front();
    for (const auto& s : steps) {
      const Vec3i n = c + s;
      if (!in_bounds(n)) continue;
      const size_t idx = cell_index(n);
      if (mask[idx] || cells_[idx] != Cell::Air) continue;
      mask[idx] = 1;
      queue.push_back(n);
    }
  }
  return mask;
}

size_t WorldGrid::air_cell_count() const {
  size_t n = 0;
  for (Cell c : cells_)
    if (c == Cell::Air) ++n;
  return n;
}

}  // namespace owl::world
