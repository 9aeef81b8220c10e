#include "owl/control/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace owl::control {

void reset_tracking(ControllerState& state) {
  state.waypoint_index = 0;
  state.path_progress = 0.0;
}

TrackStatus track_path(ControllerState& state, const std::vector<Vec3>& path,
                       const ControlEstimate& est, double dt,
                       const ControllerConfig& cfg, ControlCommand& cmd) {
  if (path.empty()) throw InvariantError("track_path: path must be nonempty");

  std::vector<double> cumlen(path.size(), 0.0);
  for (size_t k = 1; k < path.size(); ++k)
    cumlen[k] = cumlen[k - 1] + (path[k] - path[k - 1]).norm();

  // Accept waypoints the estimate has reached.
  size_t target = std::min(state.waypoint_index, path.size());
  while (target < path.size() &&
         (est.position - path[target]).norm() <= cfg.waypoint_radius) {
    ++target;
    if (target <= path.size() && target >= 1)
      state.path_progress = std::max(state.path_progress, cumlen[target - 1]);
  }
  state.waypoint_index = target;
  const bool done = target == path.size();

  ControlReference ref;
  if (done) {
    ref.position = path.back();
    ref.velocity = Vec3(0.0, 0.0, 0.0);
    ref.yaw = state.prev_reference.yaw;
  } else {
    // March the carrot along the polyline, holding at the target waypoint
    // until it is accepted. The carrot also waits while the vehicle lags
    // badly, which bounds the tracking error through corners.
    const double hold = cumlen[target];
    double s = state.path_progress;
    if (!state.has_prev_error ||
        (est.position - state.prev_reference.position).norm() <=
            2.0 * cfg.waypoint_radius)
      s = std::min(s + cfg.reference_speed * dt, hold);
    state.path_progress = s;

    // Locate the segment containing s.
    size_t seg = std::max<size_t>(target, 1) - 1;
    while (seg + 1 < path.size() - 1 && cumlen[seg + 1] < s) ++seg;
    while (seg > 0 && cumlen[seg] > s) --seg;
    const Vec3 a = path[seg];
    const Vec3 b = path[std::min(seg + 1, path.size() - 1)];
    const double seg_len = (b - a).norm();
    Vec3 tangent(0.0, 0.0, 0.0);
    if (seg_len > 1e-9) tangent = (b - a) / seg_len;

    const double along = seg_len > 1e-9 ? (s - cumlen[seg]) / seg_len : 1.0;
    ref.position = a + std::clamp(along, 0.0, 1.0) * (b - a);
    ref.velocity = s < hold ? Vec3(tangent * cfg.reference_speed)
                            : Vec3(0.0, 0.0, 0.0);

    const Vec3 to_target = path[target] - (target > 0 ? path[target - 1] : est.position);
    ref.yaw = std::hypot(to_target.x(), to_target.y()) > 1e-9
                  ? std::atan2(to_target.y(), to_target.x())
                  : state.prev_reference.yaw;
  }

  cmd = control_step(state, ref, est, dt, cfg);
  return done ? TrackStatus::Done : TrackStatus::InProgress;
}

}  // namespace owl::control
