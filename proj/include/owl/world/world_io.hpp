#pragma once

#include <iosfwd>
#include <string>

#include "owl/world/world.hpp"

namespace owl::world {

/// OWLWORLD 1: line-oriented text header (origin, voxel_edge, dims, start,
/// artifact records) followed by a run-length-encoded Solid/Air payload in
/// x-fastest order. save(load(f)) is byte-identical to save's own output.
void save_world(const WorldGrid& world, std::ostream& out);
void save_world(const WorldGrid& world, const std::string& path);

WorldGrid load_world(std::istream& in);
WorldGrid load_world(const std::string& path);

}  // namespace owl::world
