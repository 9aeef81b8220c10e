#pragma once

#include <optional>
#include <vector>

#include "owl/rng.hpp"
#include "owl/world/world.hpp"

namespace owl::sensing {

/// Forward-facing pinhole camera, yaw-aligned, pitch 0, mounted at the robot
/// position. Camera frame: x right, y down, z forward.
struct CameraModel {
  double fov_h_deg = 85.0;
  double fov_v_deg = 64.0;
  int image_w = 640;
  int image_h = 480;
  double max_detect_range = 4.0;
  double rate_hz = 3.125;  ///< whole number of 10 ms simulation ticks
  double nominal_artifact_radius = 0.25;  ///< m, drives projected bbox size

  void validate() const {
    if (fov_h_deg <= 0.0 || fov_h_deg >= 180.0 || fov_v_deg <= 0.0 ||
        fov_v_deg >= 180.0)
      throw ConfigError("camera: fov must be in (0, 180)");
    if (image_w < 16 || image_h < 16)
      throw ConfigError("camera: image dims must be >= 16");
    if (max_detect_range <= 0.0)
      throw ConfigError("camera: max_detect_range must be > 0");
  }

  double fx() const { return (image_w / 2.0) / std::tan(deg2rad(fov_h_deg) / 2.0); }
  double fy() const { return (image_h / 2.0) / std::tan(deg2rad(fov_v_deg) / 2.0); }
  double cx() const { return image_w / 2.0; }
  double cy() const { return image_h / 2.0; }
};

/// World-frame camera basis for a robot pose.
struct CameraFrame {
  Vec3 origin;
  Vec3 forward;  ///< +z
  Vec3 right;    ///< +x
  Vec3 down;     ///< +y

  explicit CameraFrame(const Pose& pose)
      : origin(pose.position),
        forward(std::cos(pose.yaw), std::sin(pose.yaw), 0.0),
        right(std::sin(pose.yaw), -std::cos(pose.yaw), 0.0),
        down(0.0, 0.0, -1.0) {}

  /// Projects a world point; nullopt when behind the camera.
  std::optional<Eigen::Vector2d> project(const CameraModel& cam,
                                         const Vec3& p) const {
    const Vec3 d = p - origin;
    const double z = d.dot(forward);
    if (z <= 1e-6) return std::nullopt;
    return Eigen::Vector2d(cam.cx() + cam.fx() * d.dot(right) / z,
                           cam.cy() + cam.fy() * d.dot(down) / z);
  }

  /// Unit world-frame direction through a pixel.
  Vec3 pixel_ray(const CameraModel& cam, double u, double v) const {
    const Vec3 d = right * ((u - cam.cx()) / cam.fx()) +
                   down * ((v - cam.cy()) / cam.fy()) + forward;
    return d.normalized();
  }
};

struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  ///< inclusive corners

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
};

struct Detection {
  double stamp = 0.0;
  world::ArtifactClass cls = world::ArtifactClass::Survivor;
  PixelRect bbox;
  std::optional<int> truth_id;  ///< scoring only
};

struct DetectionNoise {
  double p_miss = 0.0;
  double p_misclass = 0.0;
  double false_positives_per_frame = 0.0;
  double bbox_jitter_px = 0.0;
};

/// Geometric stand-in for the visual detector: emits one detection per
/// ground-truth artifact that is inside the frustum, within range, and has
/// unoccluded line of sight, subject to the configured noise.
std::vector<Detection> detect_artifacts(const world::WorldGrid& world,
                                        const Pose& pose,
                                        const CameraModel& camera,
                                        const DetectionNoise& noise,
                                        RandomEngine& rng, double stamp = 0.0);

}  // namespace owl::sensing
