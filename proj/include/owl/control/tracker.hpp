#pragma once

#include <vector>

#include "owl/control/pid.hpp"

namespace owl::control {

enum class TrackStatus { InProgress, Done };

/// Tracks a waypoint polyline: the reference pose marches along the path at
/// the configured reference speed (reference velocity feeds the derivative
/// terms), holding at the upcoming waypoint until the estimate is within the
/// acceptance radius. Reference yaw points along the current segment.
TrackStatus track_path(ControllerState& state, const std::vector<Vec3>& path,
                       const ControlEstimate& est, double dt,
                       const ControllerConfig& cfg, ControlCommand& cmd);

/// Resets the tracking cursor for a fresh path (controller integrals are
/// kept; the vehicle is still flying).
void reset_tracking(ControllerState& state);

}  // namespace owl::control
