#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "owl/artifacts/bluetooth_log.hpp"
#include "owl/artifacts/hypothesis.hpp"
#include "owl/artifacts/localization.hpp"
#include "owl/rng.hpp"

namespace owl::artifacts {
namespace {

using mapping::OccupancyMap;
using mapping::TriState;
using test_oracles::force_state;
using world::ArtifactClass;

/// Free box with an Occupied wall plane at x = wall_x (one voxel thick).
OccupancyMap wall_map(double wall_x) {
  OccupancyMap map(Vec3(0, 0, 0), 0.2, Vec3i(40, 40, 40));
  const int wall_col = static_cast<int>(wall_x / 0.2);
  Vec3i c;
  for (c.x() = 0; c.x() < 40; ++c.x())
    for (c.y() = 0; c.y() < 40; ++c.y())
      for (c.z() = 0; c.z() < 40; ++c.z())
        force_state(map, c,
                    c.x() == wall_col ? TriState::Occupied : TriState::Free);
  return map;
}

sensing::Detection centered_detection(const sensing::CameraModel& cam,
                                      int half = 30) {
  sensing::Detection det;
  det.cls = ArtifactClass::Backpack;
  det.bbox.x0 = static_cast<int>(cam.cx()) - half;
  det.bbox.x1 = static_cast<int>(cam.cx()) + half;
  det.bbox.y0 = static_cast<int>(cam.cy()) - half;
  det.bbox.y1 = static_cast<int>(cam.cy()) + half;
  return det;
}

TEST(LocalizeDetection, FlatWallMedianMatchesSortOracle) {
  const auto map = wall_map(4.0);
  sensing::CameraModel cam;
  cam.max_detect_range = 6.0;
  const Pose pose{Vec3(1.0, 4.0, 4.0), 0.0};
  const auto det = centered_detection(cam);
  const int grid_n = 5;

  const auto estimate = localize_detection(det, pose, cam, map, grid_n);
  ASSERT_TRUE(estimate.has_value());
  // Every ray hits the wall entry plane at x = 4.0.
  EXPECT_NEAR(estimate->x(), 4.0, 1e-9);

  // Sort-based median oracle over the independently gathered hit set.
  const sensing::CameraFrame frame(pose);
  std::vector<double> xs, ys, zs;
  for (int gy = 0; gy < grid_n; ++gy)
    for (int gx = 0; gx < grid_n; ++gx) {
      const double u = det.bbox.x0 +
                       (gx + 0.5) * (det.bbox.x1 - det.bbox.x0) / grid_n;
      const double v = det.bbox.y0 +
                       (gy + 0.5) * (det.bbox.y1 - det.bbox.y0) / grid_n;
      const auto hit = map.raycast(pose.position, frame.pixel_ray(cam, u, v),
                                   cam.max_detect_range, mapping::StopAt::Occupied);
      ASSERT_TRUE(hit.has_value());
      xs.push_back(hit->point.x());
      ys.push_back(hit->point.y());
      zs.push_back(hit->point.z());
    }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.size() % 2 ? v[v.size() / 2]
                        : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  EXPECT_EQ(estimate->x(), median(xs));
  EXPECT_EQ(estimate->y(), median(ys));
  EXPECT_EQ(estimate->z(), median(zs));
}

TEST(LocalizeDetection, NoOccupiedAlongRaysGivesNoReturn) {
  OccupancyMap map(Vec3(0, 0, 0), 0.2, Vec3i(40, 40, 40));
  Vec3i c;
  for (c.x() = 0; c.x() < 40; ++c.x())
    for (c.y() = 0; c.y() < 40; ++c.y())
      for (c.z() = 0; c.z() < 40; ++c.z()) force_state(map, c, TriState::Free);
  sensing::CameraModel cam;
  const auto estimate = localize_detection(
      centered_detection(cam), Pose{Vec3(1.0, 4.0, 4.0), 0.0}, cam, map, 5);
  EXPECT_FALSE(estimate.has_value());
}

TEST(LocalizeDetection, BeyondRangeGivesNoReturn) {
  const auto map = wall_map(6.0);
  sensing::CameraModel cam;
  cam.max_detect_range = 4.0;  // wall at 5 m of travel, out of reach
  const auto estimate = localize_detection(
      centered_detection(cam), Pose{Vec3(1.0, 4.0, 4.0), 0.0}, cam, map, 5);
  EXPECT_FALSE(estimate.has_value());
}

TEST(LocalizeDetection, SingleFarOutlierLeavesMedianNearWall) {
  auto map = wall_map(4.0);
  // Open a one-voxel hole so exactly one grid ray escapes to a far backstop.
  sensing::CameraModel cam;
  cam.max_detect_range = 8.0;
  const Pose pose{Vec3(1.0, 4.0, 4.0), 0.0};
  const auto det = centered_detection(cam);
  const int grid_n = 5;
  const sensing::CameraFrame frame(pose);
  // The corner grid ray (gx=gy=0) punches through; give it a backstop at 7 m.
  const double u = det.bbox.x0 + 0.5 * (det.bbox.x1 - det.bbox.x0) / grid_n;
  const double v = det.bbox.y0 + 0.5 * (det.bbox.y1 - det.bbox.y0) / grid_n;
  const auto through = map.raycast(pose.position, frame.pixel_ray(cam, u, v),
                                   cam.max_detect_range, mapping::StopAt::Occupied);
  ASSERT_TRUE(through.has_value());
  force_state(map, through->cell, TriState::Free);
  const Vec3i backstop =
      map.world_to_cell(pose.position + 6.9 * frame.pixel_ray(cam, u, v));
  force_state(map, backstop, TriState::Occupied);

  const auto estimate = localize_detection(det, pose, cam, map, grid_n);
  ASSERT_TRUE(estimate.has_value());
  // 24 of 25 rays still hit the wall plane; the median ignores the outlier.
  EXPECT_NEAR(estimate->x(), 4.0, 1e-9);
}

TEST(UpdateHypotheses, FirstDetectionSpawns) {
  std::vector<ArtifactHypothesis> hyps;
  HypothesisConfig cfg;
  update_hypotheses(hyps, ArtifactClass::Drill, Vec3(1, 2, 3), cfg);
  ASSERT_EQ(hyps.size(), 1u);
  EXPECT_EQ((hyps[0].center - Vec3(1, 2, 3)).norm(), 0.0);
  EXPECT_EQ(hyps[0].detection_count, 1);
  EXPECT_FALSE(hyps[0].frozen);
}

TEST(UpdateHypotheses, NearbyDetectionAveragesIntoSphere) {
  std::vector<ArtifactHypothesis> hyps;
  HypothesisConfig cfg;
  update_hypotheses(hyps, ArtifactClass::Drill, Vec3(1.0, 0, 0), cfg);
  update_hypotheses(hyps, ArtifactClass::Drill, Vec3(1.1, 0, 0), cfg);
  ASSERT_EQ(hyps.size(), 1u);
  EXPECT_NEAR(hyps[0].center.x(), 1.05, 1e-12);
  EXPECT_EQ(hyps[0].detection_count, 2);
}

TEST(UpdateHypotheses, FarDetectionSpawnsSecondSphere) {
  std::vector<ArtifactHypothesis> hyps;
  HypothesisConfig cfg;  // R_a = 1
  update_hypotheses(hyps, ArtifactClass::Drill, Vec3(0, 0, 0), cfg);
  update_hypotheses(hyps, ArtifactClass::Drill, Vec3(2.5, 0, 0), cfg);
  EXPECT_EQ(hyps.size(), 2u);
}

TEST(UpdateHypotheses, FreezeCountMatchesLogOddsArithmetic) {
  // log(0.9/0.2) = 1.504...; logit(0.95) = 2.944...; n = ceil(2.944/1.504) = 2.
  HypothesisConfig cfg;
  const int expected_n = static_cast<int>(
      std::ceil(std::log(0.95 / 0.05) / std::log(0.9 / 0.2)));
  ASSERT_EQ(expected_n, 2);

  std::vector<ArtifactHypothesis> hyps;
  update_hypotheses(hyps, ArtifactClass::Rope, Vec3(0, 0, 0), cfg);
  EXPECT_FALSE(hyps[0].frozen);  // one update is not enough
  update_hypotheses(hyps, ArtifactClass::Rope, Vec3(0.05, 0, 0), cfg);
  ASSERT_TRUE(hyps[0].frozen);
  ASSERT_TRUE(hyps[0].frozen_class.has_value());
  EXPECT_EQ(*hyps[0].frozen_class, ArtifactClass::Rope);
  EXPECT_GE(hyps[0].posterior(ArtifactClass::Rope), 0.95);
}

TEST(UpdateHypotheses, PosteriorEqualsBatchRecomputation) {
  HypothesisConfig cfg;
  cfg.freeze_threshold.fill(0.999999);  // keep it unfrozen for the whole run
  std::vector<ArtifactHypothesis> hyps;
  RandomEngine rng(17);
  std::array<int, world::kNumArtifactClasses> counts{};
  const int updates = 50;
  for (int k = 0; k < updates; ++k) {
    const auto cls = static_cast<ArtifactClass>(
        rng.uniform_int(static_cast<uint64_t>(world::kNumArtifactClasses)));
    counts[static_cast<size_t>(cls)]++;
    update_hypotheses(hyps, cls,
                      Vec3(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), 0.0),
                      cfg);
  }
  ASSERT_EQ(hyps.size(), 1u);
  const double up = cfg.log_odds_up();
  const double down = cfg.log_odds_down();
  for (int c = 0; c < world::kNumArtifactClasses; ++c) {
    const double expected =
        counts[c] * up + (updates - counts[c]) * down;
    EXPECT_DOUBLE_EQ(hyps[0].class_log_odds[c], expected);
  }
}

TEST(UpdateHypotheses, SphereConsistencyAndExactMean) {
  HypothesisConfig cfg;
  cfg.freeze_threshold.fill(0.999999);
  std::vector<ArtifactHypothesis> hyps;
  RandomEngine rng(23);
  std::vector<Vec3> absorbed;
  // 8 consistent detections stay below the 0.999999 freeze threshold.
  for (int k = 0; k < 8; ++k) {
    const Vec3 p(rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25),
                 rng.uniform(-0.25, 0.25));
    // Track which sphere absorbs: with R_a = 1 and points near the origin,
    // there is exactly one.
    const Vec3 center_before = hyps.empty() ? p : hyps[0].center;
    EXPECT_LE((p - center_before).norm(), cfg.sphere_radius);
    update_hypotheses(hyps, ArtifactClass::Vent, p, cfg);
    absorbed.push_back(p);
    ASSERT_EQ(hyps.size(), 1u);
    Vec3 mean(0, 0, 0);
    for (const auto& q : absorbed) mean += q;
    mean /= absorbed.size();
    EXPECT_EQ((hyps[0].center - mean).norm(), 0.0);  // recompute-and-compare
  }
}

TEST(UpdateHypotheses, FrozenHypothesisNeverChanges) {
  HypothesisConfig cfg;
  std::vector<ArtifactHypothesis> hyps;
  update_hypotheses(hyps, ArtifactClass::Helmet, Vec3(0, 0, 0), cfg);
  update_hypotheses(hyps, ArtifactClass::Helmet, Vec3(0.1, 0, 0), cfg);
  ASSERT_TRUE(hyps[0].frozen);
  const Vec3 frozen_center = hyps[0].center;
  const int frozen_count = hyps[0].detection_count;
  const auto frozen_odds = hyps[0].class_log_odds;

  // Detections inside the frozen sphere are the reported object: discarded,
  // not reopened as a fresh hypothesis.
  update_hypotheses(hyps, ArtifactClass::Helmet, Vec3(0.05, 0, 0), cfg);
  ASSERT_EQ(hyps.size(), 1u);
  EXPECT_EQ((hyps[0].center - frozen_center).norm(), 0.0);
  EXPECT_EQ(hyps[0].detection_count, frozen_count);
  EXPECT_TRUE(hyps[0].class_log_odds == frozen_odds);
  EXPECT_EQ(*hyps[0].frozen_class, ArtifactClass::Helmet);

  // A detection beyond R_a of the frozen sphere spawns normally.
  update_hypotheses(hyps, ArtifactClass::Helmet, Vec3(1.6, 0, 0), cfg);
  EXPECT_EQ(hyps.size(), 2u);
}

TEST(ReportFrozen, EmitsOncePerFrozenHypothesis) {
  HypothesisConfig cfg;
  std::vector<ArtifactHypothesis> hyps;
  EXPECT_TRUE(report_frozen(hyps).empty());

  update_hypotheses(hyps, ArtifactClass::Survivor, Vec3(3, 2, 1), cfg);
  EXPECT_TRUE(report_frozen(hyps).empty());  // not frozen yet

  update_hypotheses(hyps, ArtifactClass::Survivor, Vec3(3.1, 2, 1), cfg);
  const auto reports = report_frozen(hyps, 12.5);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].cls, ArtifactClass::Survivor);
  EXPECT_NEAR(reports[0].location.x(), 3.05, 1e-12);
  EXPECT_EQ(reports[0].detection_count, 2);
  EXPECT_DOUBLE_EQ(reports[0].stamp, 12.5);
  EXPECT_GE(
      reports[0].class_probabilities[static_cast<size_t>(ArtifactClass::Survivor)],
      0.95);

  // Idempotent: a second call reports nothing.
  EXPECT_TRUE(report_frozen(hyps).empty());
}

TEST(BluetoothLog, ReportsMeanPositionPerDevice) {
  BluetoothLog log;
  log.record({7}, Pose{Vec3(0, 0, 0), 0.0}, 1.0);
  log.record({7}, Pose{Vec3(2, 0, 0), 0.0}, 2.0);
  const auto reports = log.finalize();
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].cls, ArtifactClass::Cellphone);
  EXPECT_NEAR(reports[0].location.x(), 1.0, 1e-12);
  EXPECT_EQ(reports[0].detection_count, 2);
}

TEST(BluetoothLog, SilentDeviceNeverReported) {
  BluetoothLog log;
  log.record({}, Pose{Vec3(1, 1, 1), 0.0}, 0.0);
  EXPECT_TRUE(log.finalize().empty());
}

TEST(BluetoothLog, LineSegmentCentroid) {
  BluetoothLog log;
  const Vec3 a(1.0, 2.0, 0.5), b(5.0, -2.0, 1.5);
  const int n = 100;
  for (int k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / (n - 1);
    log.record({3}, Pose{a + s * (b - a), 0.0}, k * 0.1);
  }
  const auto reports = log.finalize();
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_NEAR((reports[0].location - 0.5 * (a + b)).norm(), 0.0, 1e-9);
}

}  // namespace
}  // namespace owl::artifacts
