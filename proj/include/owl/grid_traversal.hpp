#pragma once

#include <cmath>
#include <limits>

#include "owl/types.hpp"

namespace owl {

/// Cell ownership is half-open: cell i covers [origin + i*edge, origin + (i+1)*edge).
inline Vec3i point_to_cell(const Vec3& lattice_origin, double edge,
                           const Vec3& p) {
  return Vec3i(static_cast<int>(std::floor((p.x() - lattice_origin.x()) / edge)),
               static_cast<int>(std::floor((p.y() - lattice_origin.y()) / edge)),
               static_cast<int>(std::floor((p.z() - lattice_origin.z()) / edge)));
}

/// Amanatides-Woo traversal of a uniform grid. Visits every cell the ray
/// [start, start + dir*max_t] passes through, in order, starting with the
/// cell containing `start`. The visitor receives the cell index and the ray
/// parameter at which the cell is entered (0 for the first cell); returning
/// false stops the walk.
template <typename Visitor>
void traverse_grid(const Vec3& lattice_origin, double edge, const Vec3& start,
                   const Vec3& dir, double max_t, Visitor&& visit) {
  Vec3i cell = point_to_cell(lattice_origin, edge, start);

  Vec3i step;
  Vec3 t_max, t_delta;
  const double inf = std::numeric_limits<double>::infinity();
  for (int ax = 0; ax < 3; ++ax) {
    const double d = dir[ax];
    const double local = start[ax] - lattice_origin[ax];
    if (d > 0.0) {
      step[ax] = 1;
      const double next_boundary = (static_cast<double>(cell[ax]) + 1.0) * edge;
      t_max[ax] = (next_boundary - local) / d;
      t_delta[ax] = edge / d;
    } else if (d < 0.0) {
      step[ax] = -1;
      const double next_boundary = static_cast<double>(cell[ax]) * edge;
      t_max[ax] = (next_boundary - local) / d;
      t_delta[ax] = edge / -d;
    } else {
      step[ax] = 0;
      t_max[ax] = inf;
      t_delta[ax] = inf;
    }
  }

  double t_entry = 0.0;
  while (t_entry <= max_t) {
    if (!visit(cell, t_entry)) return;
    int ax = 0;
    if (t_max.y() < t_max.x()) ax = 1;
    if (t_max.z() < t_max[ax]) ax = 2;
    t_entry = t_max[ax];
    if (step[ax] == 0) return;  // dir is zero: single-cell column exhausted
    cell[ax] += step[ax];
    t_max[ax] += t_delta[ax];
  }
}

}  // namespace owl
