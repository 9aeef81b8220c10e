#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace owl {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;

inline constexpr double kPi = 3.14159265358979323846;

/// Position + heading; the only orientation degree of freedom carried
/// through the simulator.
struct Pose {
  Vec3 position{0.0, 0.0, 0.0};
  double yaw = 0.0;
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

inline bool same_cell(const Vec3i& a, const Vec3i& b) {
  return a.x() == b.x() && a.y() == b.y() && a.z() == b.z();
}

/// Rotates a sensor/body-frame vector into the world frame (yaw only).
inline Vec3 yaw_rotate(double yaw, const Vec3& v) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return Vec3(c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z());
}

/// Inverse of yaw_rotate.
inline Vec3 yaw_unrotate(double yaw, const Vec3& v) {
  return yaw_rotate(-yaw, v);
}

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runtime consistency violation; the mission runner maps this to a
/// dedicated exit code.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace owl
