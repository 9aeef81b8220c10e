#pragma once

#include "owl/rng.hpp"
#include "owl/types.hpp"

namespace owl::sensing {

struct OdomNoise {
  double white_sigma_xyz = 0.0;   ///< m, per axis per sample
  double white_sigma_yaw = 0.0;   ///< rad
  double drift_sigma_xyz = 0.0;   ///< m per sqrt(s), random-walk per axis
};

/// Stand-in for the onboard localization output: the true pose plus an
/// optional slowly varying random-walk drift and white noise. Defaults are
/// zero (perfect odometry).
class OdometrySimulator {
 public:
  OdometrySimulator(const OdomNoise& noise, uint64_t seed)
      : noise_(noise), rng_(seed) {}

  Pose read(const Pose& true_pose, double dt) {
    if (noise_.drift_sigma_xyz > 0.0 && dt > 0.0) {
      const double s = noise_.drift_sigma_xyz * std::sqrt(dt);
      drift_ += Vec3(rng_.normal(0.0, s), rng_.normal(0.0, s), rng_.normal(0.0, s));
    }
    Pose est = true_pose;
    est.position += drift_;
    if (noise_.white_sigma_xyz > 0.0) {
      est.position += Vec3(rng_.normal(0.0, noise_.white_sigma_xyz),
                           rng_.normal(0.0, noise_.white_sigma_xyz),
                           rng_.normal(0.0, noise_.white_sigma_xyz));
    }
    if (noise_.white_sigma_yaw > 0.0)
      est.yaw = wrap_angle(est.yaw + rng_.normal(0.0, noise_.white_sigma_yaw));
    return est;
  }

  const Vec3& drift() const { return drift_; }

 private:
  OdomNoise noise_;
  RandomEngine rng_;
  Vec3 drift_{0.0, 0.0, 0.0};
};

}  // namespace owl::sensing
