#pragma once

#include <cstdint>
#include <vector>

#include "owl/world/world.hpp"

namespace owl::world {

/// Parameters for the procedural tunnel-network generator. Corridors are
/// carved by an axis-biased random walk with branches and junction rooms;
/// cross-section width/height are sampled per segment from the given ranges.
struct TunnelSpec {
  Vec3i dims{300, 300, 30};
  double voxel_edge = 0.2;

  int segments = 20;               ///< corridor segments to carve
  double segment_min_len = 8.0;    ///< m
  double segment_max_len = 14.0;   ///< m
  double min_width = 1.8;          ///< m, corridor cross-section
  double max_width = 2.4;
  double min_height = 2.0;
  double max_height = 2.6;
  double branch_prob = 0.35;       ///< chance to fork a side branch per segment
  double turn_prob = 0.45;         ///< chance to change heading per segment
  double climb_prob = 0.15;        ///< chance of a one-voxel floor level change
  double room_width = 2.4;         ///< junction room size at branch points, m
  double room_height = 2.4;

  /// Wide-gallery option: carve this many rooms of gallery_width at walk
  /// waypoints (0 disables). The widest gallery fixes the maximum
  /// cross-section of the world.
  int gallery_count = 0;
  double gallery_width = 14.0;
  double gallery_height = 5.0;

  int artifact_count = 0;
  bool artifact_bluetooth = true;      ///< give cellphones a bluetooth beacon
  double artifact_min_separation = 5.0;  ///< m
};

/// Deterministic for fixed (spec, seed). All Air cells are 6-connected
/// reachable from the start cell; artifacts sit in Air at least one voxel
/// away from Solid (and close enough to a wall to be localizable by
/// surface raycasts). Throws GenerationError when the spec is infeasible.
WorldGrid generate_tunnel_world(const TunnelSpec& spec, uint64_t seed);

}  // namespace owl::world
