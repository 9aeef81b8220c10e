#include "owl/sensing/camera.hpp"

#include <algorithm>
#include <cmath>

namespace owl::sensing {

namespace {

std::optional<PixelRect> clamp_rect(const CameraModel& cam, double u0, double v0,
                                    double u1, double v1) {
  PixelRect r;
  r.x0 = std::max(0, static_cast<int>(std::lround(u0)));
  r.y0 = std::max(0, static_cast<int>(std::lround(v0)));
  r.x1 = std::min(cam.image_w - 1, static_cast<int>(std::lround(u1)));
  r.y1 = std::min(cam.image_h - 1, static_cast<int>(std::lround(v1)));
  if (r.x1 <= r.x0 || r.y1 <= r.y0) return std::nullopt;
  return r;
}

}  // namespace

std::vector<Detection> detect_artifacts(const world::WorldGrid& world,
                                        const Pose& pose,
                                        const CameraModel& camera,
                                        const DetectionNoise& noise,
                                        RandomEngine& rng, double stamp) {
  camera.validate();
  const CameraFrame frame(pose);
  std::vector<Detection> out;

  for (const auto& artifact : world.artifacts()) {
    const Vec3 d = artifact.center - frame.origin;
    const double dist = d.norm();
    if (dist > camera.max_detect_range || dist < 1e-6) continue;
    const auto px = frame.project(camera, artifact.center);
    if (!px) continue;
    if (px->x() < 0.0 || px->x() > camera.image_w - 1 || px->y() < 0.0 ||
        px->y() > camera.image_h - 1)
      continue;
    // Line-of-sight against the ground-truth grid.
    const auto block = world.raycast(frame.origin, d / dist, dist);
    if (block && block->range < dist - 1e-9) continue;

    if (noise.p_miss > 0.0 && rng.uniform() < noise.p_miss) continue;

    const double depth = d.dot(frame.forward);
    double u = px->x();
    double v = px->y();
    if (noise.bbox_jitter_px > 0.0) {
      u += rng.normal(0.0, noise.bbox_jitter_px);
      v += rng.normal(0.0, noise.bbox_jitter_px);
    }
    const double ru =
        std::max(2.0, camera.fx() * camera.nominal_artifact_radius / depth);
    const double rv =
        std::max(2.0, camera.fy() * camera.nominal_artifact_radius / depth);
    const auto rect = clamp_rect(camera, u - ru, v - rv, u + ru, v + rv);
    if (!rect) continue;

    Detection det;
    det.stamp = stamp;
    det.bbox = *rect;
    det.truth_id = artifact.id;
    det.cls = artifact.cls;
    if (noise.p_misclass > 0.0 && rng.uniform() < noise.p_misclass) {
      const int shift =
          1 + static_cast<int>(rng.uniform_int(
                  static_cast<uint64_t>(world::kNumArtifactClasses - 1)));
      det.cls = static_cast<world::ArtifactClass>(
          (static_cast<int>(artifact.cls) + shift) % world::kNumArtifactClasses);
    }
    out.push_back(det);
  }

  // Spurious detections, uniformly placed in the image.
  if (noise.false_positives_per_frame > 0.0) {
    int n = static_cast<int>(noise.false_positives_per_frame);
    const double frac = noise.false_positives_per_frame - n;
    if (frac > 0.0 && rng.uniform() < frac) ++n;
    for (int k = 0; k < n; ++k) {
      const double u = rng.uniform(0.0, camera.image_w - 1.0);
      const double v = rng.uniform(0.0, camera.image_h - 1.0);
      const double r = rng.uniform(4.0, 30.0);
      const auto rect = clamp_rect(camera, u - r, v - r, u + r, v + r);
      const auto cls = static_cast<world::ArtifactClass>(
          rng.uniform_int(static_cast<uint64_t>(world::kNumArtifactClasses)));
      if (!rect) continue;
      Detection det;
      det.stamp = stamp;
      det.bbox = *rect;
      det.cls = cls;
      out.push_back(det);
    }
  }
  return out;
}

}  // namespace owl::sensing
