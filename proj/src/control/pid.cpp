#include "owl/control/pid.hpp"

#include <algorithm>

namespace owl::control {

ControlCommand control_step(ControllerState& state, const ControlReference& ref,
                            const ControlEstimate& est, double dt,
                            const ControllerConfig& cfg) {
  if (dt <= 0.0) throw InvariantError("control_step: dt must be > 0");

  const Vec3 error = ref.position - est.position;
  const Vec3 prev = state.has_prev_error ? state.prev_error : error;
  ControlCommand cmd;
  for (int ax = 0; ax < 3; ++ax) {
    state.integrals[ax] = std::clamp(
        state.integrals[ax] + 0.5 * (prev[ax] + error[ax]) * dt, cfg.i_min[ax],
        cfg.i_max[ax]);
    cmd.accel[ax] = cfg.kp[ax] * error[ax] + cfg.ki[ax] * state.integrals[ax] +
                    cfg.kd[ax] * (ref.velocity[ax] - est.velocity[ax]);
  }
  cmd.yaw_rate = cfg.kp_yaw * wrap_angle(ref.yaw - est.yaw);

  state.prev_error = error;
  state.has_prev_error = true;
  state.prev_reference = ref;
  return cmd;
}

}  // namespace owl::control
