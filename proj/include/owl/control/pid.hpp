#pragma once

#include "owl/types.hpp"

namespace owl::control {

/// Fixed-gain PID position controller + proportional yaw controller.
struct ControllerConfig {
  Vec3 kp{4.0, 4.0, 6.0};
  Vec3 ki{1.0, 1.0, 1.5};
  Vec3 kd{3.0, 3.0, 4.0};
  double kp_yaw = 2.0;
  Vec3 i_min{-1.0, -1.0, -1.0};
  Vec3 i_max{1.0, 1.0, 1.0};
  double waypoint_radius = 0.4;  ///< m
  double reference_speed = 1.0;  ///< m/s

  void validate() const {
    if (kp.minCoeff() < 0.0 || ki.minCoeff() < 0.0 || kd.minCoeff() < 0.0 ||
        kp_yaw < 0.0)
      throw ConfigError("controller: gains must be >= 0");
    for (int ax = 0; ax < 3; ++ax)
      if (i_min[ax] >= i_max[ax])
        throw ConfigError("controller: I_min must be < I_max per axis");
    if (waypoint_radius <= 0.0 || reference_speed <= 0.0)
      throw ConfigError("controller: waypoint radius and speed must be > 0");
  }
};

struct ControlReference {
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 velocity{0.0, 0.0, 0.0};
  double yaw = 0.0;
};

struct ControlEstimate {
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 velocity{0.0, 0.0, 0.0};
  double yaw = 0.0;
};

struct ControllerState {
  Vec3 integrals{0.0, 0.0, 0.0};
  Vec3 prev_error{0.0, 0.0, 0.0};
  bool has_prev_error = false;
  ControlReference prev_reference;
  size_t waypoint_index = 0;   ///< path tracking cursor
  double path_progress = 0.0;  ///< carrot arc length along the path, m
};

struct ControlCommand {
  Vec3 accel{0.0, 0.0, 0.0};  ///< commanded acceleration, inertial frame
  double yaw_rate = 0.0;
};

/// One controller update:
///   a_r^j = Kp^j e_j + Ki^j clamp(I_j, Imin, Imax) + Kd^j (v_r^j - v^j)
///   yawrate_r = Kp_yaw wrap(yaw_r - yaw)
/// with trapezoidal integral accumulation, clamped (anti-windup).
ControlCommand control_step(ControllerState& state, const ControlReference& ref,
                            const ControlEstimate& est, double dt,
                            const ControllerConfig& cfg);

}  // namespace owl::control
