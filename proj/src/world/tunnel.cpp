#include "owl/world/tunnel.hpp"

#include <algorithm>
#include <deque>

#include "owl/rng.hpp"

namespace owl::world {

namespace {

struct Carver {
  Vec3i dims;
  std::vector<Cell> cells;

  size_t index(int x, int y, int z) const {
    return (static_cast<size_t>(z) * dims.y() + y) * dims.x() + x;
  }

  /// Carves an inclusive cell box, clamped so the boundary shell stays Solid.
  void carve_box(Vec3i lo, Vec3i hi) {
    for (int ax = 0; ax < 3; ++ax) {
      lo[ax] = std::max(lo[ax], 1);
      hi[ax] = std::min(hi[ax], dims[ax] - 2);
    }
    for (int z = lo.z(); z <= hi.z(); ++z)
      for (int y = lo.y(); y <= hi.y(); ++y)
        for (int x = lo.x(); x <= hi.x(); ++x) cells[index(x, y, z)] = Cell::Air;
  }

  bool box_fits(const Vec3i& lo, const Vec3i& hi) const {
    for (int ax = 0; ax < 3; ++ax)
      if (lo[ax] < 1 || hi[ax] > dims[ax] - 2) return false;
    return true;
  }
};

const Vec3i kHeadings[4] = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};

/// Inclusive cell box of a corridor cross-section at floor-center cell `pos`
/// for a corridor running along `heading`.
void cross_section(const Vec3i& pos, int heading, int w_cells, int h_cells,
                   Vec3i& lo, Vec3i& hi) {
  const bool along_x = (heading % 2 == 0);
  const int half_lo = (w_cells - 1) / 2;
  const int half_hi = w_cells / 2;
  lo = pos;
  hi = pos;
  if (along_x) {
    lo.y() -= half_lo;
    hi.y() += half_hi;
  } else {
    lo.x() -= half_lo;
    hi.x() += half_hi;
  }
  hi.z() += h_cells - 1;
}

int cells_of(double meters, double edge) {
  return std::max(1, static_cast<int>(std::lround(meters / edge)));
}

}  // namespace

WorldGrid generate_tunnel_world(const TunnelSpec& spec, uint64_t seed) {
  const double e = spec.voxel_edge;
  if (e <= 0.0) throw GenerationError("tunnel spec: voxel_edge must be > 0");
  if (spec.segments < 1)
    throw GenerationError("tunnel spec: segment count must be >= 1");
  if (spec.min_width < 3.0 * e || spec.min_height < 3.0 * e)
    throw GenerationError(
        "tunnel spec: cross-section widths must be >= 3 x voxel_edge");
  if (spec.max_width < spec.min_width || spec.max_height < spec.min_height)
    throw GenerationError("tunnel spec: width/height ranges are inverted");

  const Vec3i dims = spec.dims;
  double max_carve_w = std::max(spec.max_width, spec.room_width);
  double max_carve_h = std::max(spec.max_height, spec.room_height);
  if (spec.gallery_count > 0) {
    max_carve_w = std::max(max_carve_w, spec.gallery_width);
    max_carve_h = std::max(max_carve_h, spec.gallery_height);
  }
  if (cells_of(max_carve_w, e) + 2 > std::min(dims.x(), dims.y()))
    throw GenerationError(
        "tunnel spec: grid dims too small for the widest cross-section");
  if (cells_of(max_carve_h, e) + 3 > dims.z())
    throw GenerationError(
        "tunnel spec: grid z dimension too small for the tallest cross-section");

  RandomEngine rng(seed);
  Carver carver{dims, std::vector<Cell>(
                          static_cast<size_t>(dims.x()) * dims.y() * dims.z(),
                          Cell::Solid)};

  const int room_w = cells_of(spec.room_width, e);
  const int room_h = cells_of(spec.room_height, e);

  // Corridor centerlines live on a horizontal lane lattice wide enough that
  // parallel corridors either coincide or keep a solid wall between them;
  // without it, offset overlaps widen cross-sections past the spec range.
  const int lane =
      std::max(room_w, cells_of(spec.max_width, e)) + std::max(8, room_w / 2);
  auto snap = [&](int v) { return std::max(lane, (v / lane) * lane); };

  // Start in one quadrant so the network has room to sprawl.
  const int floor0 = 2;
  Vec3i pos(snap(std::max(room_w + 2, dims.x() / 6)), snap(dims.y() / 2),
            floor0);
  const Vec3i start_cell = pos + Vec3i(0, 0, 1);
  const int room_lo = (room_w - 1) / 2, room_hi = room_w / 2;
  carver.carve_box(pos - Vec3i(room_lo, room_lo, 0),
                   pos + Vec3i(room_hi, room_hi, room_h - 1));

  int heading = 0;  // +x
  struct Branch {
    Vec3i pos;
    int heading;
  };
  std::vector<Branch> pending;

  // Schedule gallery rooms evenly across the walk.
  std::vector<int> gallery_at;
  for (int g = 0; g < spec.gallery_count; ++g)
    gallery_at.push_back((g + 1) * spec.segments / (spec.gallery_count + 1));

  const int max_floor = dims.z() - cells_of(max_carve_h, e) - 2;

  for (int seg = 0; seg < spec.segments; ++seg) {
    const int w = cells_of(rng.uniform(spec.min_width, spec.max_width), e);
    const int h = cells_of(rng.uniform(spec.min_height, spec.max_height), e);
    // Segment lengths are whole lanes so turns land back on the lattice.
    int len =
        snap(cells_of(rng.uniform(spec.segment_min_len, spec.segment_max_len), e));

    if (rng.uniform() < spec.turn_prob)
      heading = (heading + (rng.uniform() < 0.5 ? 1 : 3)) % 4;

    // Keep the walk inside the grid: truncate to the feasible run (in whole
    // lanes), turning toward the interior when boxed in.
    auto feasible_run = [&](int hd) {
      const Vec3i dir = kHeadings[hd];
      int run = 0;
      Vec3i p = pos;
      while (run < len) {
        Vec3i lo, hi;
        cross_section(p + dir, hd, w, h, lo, hi);
        if (!carver.box_fits(lo, hi)) break;
        p += dir;
        ++run;
      }
      return (run / lane) * lane;
    };
    int run = feasible_run(heading);
    if (run < lane) {
      // Pick the heading with the longest open run.
      int best_hd = heading, best_run = run;
      for (int hd = 0; hd < 4; ++hd) {
        const int r = feasible_run(hd);
        if (r > best_run) {
          best_run = r;
          best_hd = hd;
        }
      }
      heading = best_hd;
      run = best_run;
      if (run < lane) {
        if (pending.empty()) continue;
        pos = pending.back().pos;
        heading = pending.back().heading;
        pending.pop_back();
        continue;
      }
    }

    const Vec3i dir = kHeadings[heading];
    for (int k = 1; k <= run; ++k) {
      Vec3i lo, hi;
      cross_section(pos + k * dir, heading, w, h, lo, hi);
      carver.carve_box(lo, hi);
    }
    pos += run * dir;

    // Occasional one-voxel floor level change.
    if (rng.uniform() < spec.climb_prob) {
      const int dz = rng.uniform() < 0.5 ? 1 : -1;
      const int nz = pos.z() + dz;
      if (nz >= 1 && nz <= max_floor) {
        // Carve the step column one voxel taller so the ramp stays open.
        Vec3i lo, hi;
        cross_section(pos, heading, w, h + 1, lo, hi);
        if (dz < 0) lo.z() -= 1;
        carver.carve_box(lo, hi);
        pos.z() = nz;
      }
    }

    if (rng.uniform() < spec.branch_prob && pending.size() < 4) {
      const int side = rng.uniform() < 0.5 ? 1 : 3;
      pending.push_back(Branch{pos, (heading + side) % 4});
      carver.carve_box(pos - Vec3i(room_lo, room_lo, 0),
                       pos + Vec3i(room_hi, room_hi, room_h - 1));
    }

    if (std::find(gallery_at.begin(), gallery_at.end(), seg) != gallery_at.end()) {
      // First gallery is carved at full width; later ones vary.
      const bool first = !gallery_at.empty() && seg == gallery_at.front();
      const double gw =
          first ? spec.gallery_width
                : rng.uniform(0.6 * spec.gallery_width, spec.gallery_width);
      const int gwc = cells_of(gw, e);
      const int ghc = cells_of(spec.gallery_height, e);
      Vec3i lo = pos - Vec3i(gwc / 2, gwc / 2, 0);
      Vec3i hi = pos + Vec3i((gwc - 1) / 2, (gwc - 1) / 2, ghc - 1);
      // Shift the box inward instead of clamping it narrower.
      for (int ax = 0; ax < 2; ++ax) {
        if (lo[ax] < 1) {
          hi[ax] += 1 - lo[ax];
          lo[ax] = 1;
        }
        if (hi[ax] > dims[ax] - 2) {
          lo[ax] -= hi[ax] - (dims[ax] - 2);
          hi[ax] = dims[ax] - 2;
        }
      }
      carver.carve_box(lo, hi);
    }

    // Sometimes resume from a stashed branch point, leaving a dead end behind.
    if (!pending.empty() && rng.uniform() < 0.4) {
      pos = pending.back().pos;
      heading = pending.back().heading;
      pending.pop_back();
    }
  }

  // Seal off anything the walk carved but disconnected (paranoia: the walk is
  // contiguous by construction, but clamped boxes can pinch).
  {
    std::vector<uint8_t> seen(carver.cells.size(), 0);
    std::deque<Vec3i> queue{start_cell};
    seen[carver.index(start_cell.x(), start_cell.y(), start_cell.z())] = 1;
    const Vec3i steps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                            {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    while (!queue.empty()) {
      const Vec3i c = queue.front();
      queue.pop_front();
      for (const auto& s : steps) {
        const Vec3i n = c + s;
        if (n.x() < 0 || n.y() < 0 || n.z() < 0 || n.x() >= dims.x() ||
            n.y() >= dims.y() || n.z() >= dims.z())
          continue;
        const size_t idx = carver.index(n.x(), n.y(), n.z());
        if (seen[idx] || carver.cells[idx] != Cell::Air) continue;
        seen[idx] = 1;
        queue.push_back(n);
      }
    }
    for (size_t i = 0; i < carver.cells.size(); ++i)
      if (carver.cells[i] == Cell::Air && !seen[i]) carver.cells[i] = Cell::Solid;
  }

  // Artifact placement: Air cells whose full 26-neighborhood is Air (at least
  // one voxel from Solid) but with a lateral wall two cells away, so surface
  // raycasts land close to the true center.
  std::vector<GroundTruthArtifact> artifacts;
  if (spec.artifact_count > 0) {
    auto is_air = [&](int x, int y, int z) {
      return carver.cells[carver.index(x, y, z)] == Cell::Air;
    };
    std::vector<Vec3i> candidates;
    for (int z = 2; z < dims.z() - 2; ++z) {
      for (int y = 2; y < dims.y() - 2; ++y) {
        for (int x = 2; x < dims.x() - 2; ++x) {
          if (!is_air(x, y, z)) continue;
          bool clear = true;
          for (int dz = -1; dz <= 1 && clear; ++dz)
            for (int dy = -1; dy <= 1 && clear; ++dy)
              for (int dx = -1; dx <= 1 && clear; ++dx)
                if (!is_air(x + dx, y + dy, z + dz)) clear = false;
          if (!clear) continue;
          bool wall_close = false;
          for (int dz = -1; dz <= 1 && !wall_close; ++dz) {
            if (!is_air(x + 2, y, z + dz) || !is_air(x - 2, y, z + dz) ||
                !is_air(x, y + 2, z + dz) || !is_air(x, y - 2, z + dz))
              wall_close = true;
          }
          if (wall_close) candidates.push_back(Vec3i(x, y, z));
        }
      }
    }
    const double min_sep2 =
        spec.artifact_min_separation * spec.artifact_min_separation;
    std::vector<Vec3i> chosen;
    int attempts = 0;
    while (static_cast<int>(chosen.size()) < spec.artifact_count &&
           attempts < 200000 && !candidates.empty()) {
      ++attempts;
      const Vec3i c = candidates[rng.uniform_int(candidates.size())];
      bool ok = true;
      for (const auto& o : chosen) {
        const Vec3 d = (c - o).cast<double>() * e;
        if (d.squaredNorm() < min_sep2) {
          ok = false;
          break;
        }
      }
      if (ok) chosen.push_back(c);
    }
    if (static_cast<int>(chosen.size()) < spec.artifact_count)
      throw GenerationError(
          "tunnel spec: could not place the requested artifact count with the "
          "given separation");
    const Vec3 origin(0.0, 0.0, 0.0);
    for (size_t i = 0; i < chosen.size(); ++i) {
      GroundTruthArtifact a;
      a.id = static_cast<int>(i);
      a.cls = static_cast<ArtifactClass>(i % kNumArtifactClasses);
      a.center = origin + e * (chosen[i].cast<double>() + Vec3(0.5, 0.5, 0.5));
      a.bluetooth = spec.artifact_bluetooth && a.cls == ArtifactClass::Cellphone;
      artifacts.push_back(a);
    }
  }

  return WorldGrid(Vec3(0.0, 0.0, 0.0), e, dims, std::move(carver.cells),
                   std::move(artifacts), start_cell);
}

}  // namespace owl::world
