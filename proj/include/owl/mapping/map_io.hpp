#pragma once

#include <iosfwd>
#include <string>

#include "owl/mapping/occupancy_map.hpp"

namespace owl::mapping {

/// Occupied-voxel centers as an ASCII PLY point cloud.
void export_occupied_ply(const OccupancyMap& map, std::ostream& out);
void export_occupied_ply(const OccupancyMap& map, const std::string& path);

/// Full tri-state dump (OWLMAP 1 magic, RLE payload of U/F/O runs in
/// x-fastest window order).
void export_tristate(const OccupancyMap& map, std::ostream& out);
void export_tristate(const OccupancyMap& map, const std::string& path);

/// Converts an OWLMAP dump to a PLY cloud of occupied-voxel centers.
void owlmap_to_ply(std::istream& in, std::ostream& out);

/// Generic ASCII PLY writer for point sets (scan dumps).
void write_point_ply(const std::vector<Vec3>& points, std::ostream& out);

}  // namespace owl::mapping
