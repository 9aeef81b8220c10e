#include "owl/mission/runner.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "owl/artifacts/bluetooth_log.hpp"
#include "owl/artifacts/localization.hpp"
#include "owl/control/tracker.hpp"
#include "owl/mapping/map_io.hpp"
#include "owl/planner/global.hpp"
#include "owl/sensing/bluetooth.hpp"
#include "owl/world/world_io.hpp"

namespace owl::mission {

namespace {

namespace fs = std::filesystem;

/// Seed streams fanned out from the master seed.
enum SeedStream : uint64_t {
  kSeedWorld = 1,
  kSeedLidar = 2,
  kSeedDetector = 3,
  kSeedOdometry = 4,
  kSeedPlanner = 5,
};

int ticks_per(double rate_hz, double dt) {
  return std::max(1, static_cast<int>(std::lround(1.0 / (rate_hz * dt))));
}

const char* mode_name(int mode) {
  static const char* names[] = {"idle", "local", "global", "homing", "landed"};
  return names[mode];
}

enum Mode { kIdle = 0, kLocal, kGlobal, kHoming, kLanded };

struct Outputs {
  std::ofstream trajectory;
  std::ofstream trace;
  std::ofstream reports;
  std::ofstream bluetooth;
  bool enabled = false;
  std::string dir;
};

void write_report_line(std::ofstream& out, const artifacts::ArtifactReport& r) {
  nlohmann::json j;
  j["stamp"] = r.stamp;
  j["class"] = world::artifact_class_name(r.cls);
  j["x"] = r.location.x();
  j["y"] = r.location.y();
  j["z"] = r.location.z();
  nlohmann::json probs;
  for (int c = 0; c < world::kNumArtifactClasses; ++c)
    probs[world::artifact_class_name(static_cast<world::ArtifactClass>(c))] =
        r.class_probabilities[c];
  j["probabilities"] = probs;
  j["detection_count"] = r.detection_count;
  out << j.dump() << '\n';
}

}  // namespace

MissionResult run_mission_on_world(const MissionConfig& cfg,
                                   const world::WorldGrid& world,
                                   const std::string& out_dir) {
  cfg.validate();

  Outputs out;
  if (!out_dir.empty()) {
    out.enabled = true;
    out.dir = out_dir;
    fs::create_directories(out_dir);
    out.trajectory.open(out_dir + "/trajectory.csv", std::ios::binary);
    out.trace.open(out_dir + "/planner_trace.jsonl", std::ios::binary);
    out.reports.open(out_dir + "/artifact_reports.jsonl", std::ios::binary);
    out.bluetooth.open(out_dir + "/bluetooth_reports.jsonl", std::ios::binary);
    if (!out.trajectory || !out.trace || !out.reports || !out.bluetooth)
      throw ConfigError("mission: cannot open output files in " + out_dir);
    out.trajectory << "t,x,y,z,yaw,vx,vy,vz,mode\n";
    save_world(world, out_dir + "/world.owlworld");
    if (cfg.outputs.dump_clouds) fs::create_directories(out_dir + "/clouds");
  }

  // --- map sized to the configured extent, or covering the world ---
  const double edge = cfg.mapping.voxel_edge;
  Vec3 extent = cfg.mapping.extent;
  Vec3 desired_origin;
  if (extent.minCoeff() <= 0.0) {
    const Vec3 world_size =
        world.dims().cast<double>() * world.voxel_edge();
    extent = world_size + 2.0 * Vec3::Constant(cfg.mapping.pad);
    desired_origin = world.origin() - Vec3::Constant(cfg.mapping.pad);
  } else {
    desired_origin = world.start_position() +
                     Vec3(0.0, 0.0, cfg.takeoff_height) - extent / 2.0;
  }
  // Snap the window onto the world lattice so aligned resolutions stay exact.
  Vec3 origin = world.origin() +
                edge * ((desired_origin - world.origin()) / edge)
                           .array()
                           .round()
                           .matrix();
  const Vec3i dims = (extent / edge).array().ceil().cast<int>();
  mapping::OccupancyMap map(origin, edge, dims, cfg.mapping.thresholds);

  // --- actors and per-subsystem random streams ---
  RandomEngine lidar_rng(mix_seed(cfg.master_seed, kSeedLidar));
  RandomEngine detector_rng(mix_seed(cfg.master_seed, kSeedDetector));
  RandomEngine planner_rng(mix_seed(cfg.master_seed, kSeedPlanner));
  sensing::OdometrySimulator odometry(cfg.odometry,
                                      mix_seed(cfg.master_seed, kSeedOdometry));

  vehicle::RobotState robot;
  robot.position = world.start_position() + Vec3(0.0, 0.0, cfg.takeoff_height);
  const Vec3 home = robot.position;

  control::ControllerState ctrl;
  planner::GlobalGraph global(home);
  std::optional<int> robot_anchor;
  std::vector<artifacts::ArtifactHypothesis> hypotheses;
  artifacts::BluetoothLog bluetooth_log;

  MissionResult result;
  result.ground_truth = world.artifacts();
  MissionMetrics& metrics = result.metrics;

  // Reachable ground truth for the exploration metric.
  const std::vector<uint8_t> reachable = world.reachable_air_mask();
  std::vector<uint32_t> reachable_cells;
  for (size_t i = 0; i < reachable.size(); ++i)
    if (reachable[i]) reachable_cells.push_back(static_cast<uint32_t>(i));
  metrics.reachable_air_voxels = reachable_cells.size();
  std::vector<uint8_t> observed(reachable_cells.size(), 0);
  size_t observed_count = 0;

  auto update_explored = [&]() {
    for (size_t i = 0; i < reachable_cells.size(); ++i) {
      if (observed[i]) continue;
      const uint32_t flat = reachable_cells[i];
      const int x = static_cast<int>(flat % world.dims().x());
      const int y = static_cast<int>((flat / world.dims().x()) % world.dims().y());
      const int z = static_cast<int>(flat / (static_cast<size_t>(world.dims().x()) *
                                             world.dims().y()));
      if (map.state_at(world.cell_center(Vec3i(x, y, z))) !=
          mapping::TriState::Unknown) {
        observed[i] = 1;
        ++observed_count;
      }
    }
    metrics.explored_fraction =
        reachable_cells.empty()
            ? 0.0
            : static_cast<double>(observed_count) / reachable_cells.size();
  };

  // --- tick bookkeeping ---
  const double dt = cfg.sim_dt;
  const int lidar_div = ticks_per(cfg.lidar.rate_hz, dt);
  const int detect_div = ticks_per(cfg.camera.rate_hz, dt);
  const int bt_div = ticks_per(cfg.bluetooth_rate_hz, dt);

  std::deque<std::vector<Vec3>> recent_hits;
  std::vector<Vec3> aggregated;
  auto rebuild_aggregated = [&]() {
    aggregated.clear();
    for (const auto& scan : recent_hits)
      aggregated.insert(aggregated.end(), scan.begin(), scan.end());
  };

  Mode mode = kIdle;
  std::vector<Vec3> active_path;
  int nogain_count = 0;
  double last_progress_change = 0.0;
  size_t last_wp_index = 0;
  double last_wp_progress = 0.0;
  Pose est_pose{robot.position, robot.yaw};

  char line[256];
  auto log_state = [&](double t) {
    if (!out.enabled) return;
    std::snprintf(line, sizeof(line),
                  "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s\n", t,
                  robot.position.x(), robot.position.y(), robot.position.z(),
                  robot.yaw, robot.velocity.x(), robot.velocity.y(),
                  robot.velocity.z(), mode_name(mode));
    out.trajectory << line;
  };

  auto log_trace = [&](double t, const char* trigger,
                       const planner::PlanResult* plan) {
    if (!out.enabled) return;
    nlohmann::json j;
    j["iter"] = metrics.planning_iterations;
    j["t"] = t;
    j["trigger"] = trigger;
    j["vertices"] = plan ? plan->vertex_count : 0;
    j["edges"] = plan ? plan->edge_count : 0;
    j["best_gain"] = plan ? plan->gain : 0.0;
    j["chosen_leaf"] = plan ? plan->chosen_leaf : -1;
    out.trace << j.dump() << '\n';
  };

  auto emit_frozen_reports = [&](double t) {
    for (auto& r : artifacts::report_frozen(hypotheses, t)) {
      if (out.enabled) write_report_line(out.reports, r);
      result.vision_reports.push_back(r);
    }
  };

  const double nominal_speed = cfg.controller.reference_speed;
  bool failed = false;
  int scan_number = 0;

  const long max_ticks = static_cast<long>(std::ceil(cfg.endurance_s / dt)) + 1;
  for (long k = 0;; ++k) {
    const double t = k * dt;

    // --- sensing ---
    est_pose = odometry.read(Pose{robot.position, robot.yaw}, dt);
    if (k % lidar_div == 0) {
      const auto cloud = sensing::scan_lidar(world, Pose{robot.position, robot.yaw},
                                             cfg.lidar, t, &lidar_rng);
      integrate_scan(map, cloud, Pose{est_pose.position, est_pose.yaw});
      // Keep a subsampled world-frame hit set for the adaptive local box.
      std::vector<Vec3> hits;
      for (size_t i = 0; i < cloud.points.size(); i += 3) {
        if (!cloud.hit_mask[i]) continue;
        hits.push_back(est_pose.position +
                       yaw_rotate(est_pose.yaw, cloud.points[i]));
      }
      recent_hits.push_back(std::move(hits));
      while (recent_hits.size() > static_cast<size_t>(cfg.aggregated_scans))
        recent_hits.pop_front();
      rebuild_aggregated();
      if (out.enabled && cfg.outputs.dump_clouds) {
        std::vector<Vec3> world_pts;
        for (size_t i = 0; i < cloud.points.size(); ++i)
          if (cloud.hit_mask[i])
            world_pts.push_back(robot.position +
                                yaw_rotate(robot.yaw, cloud.points[i]));
        char name[64];
        std::snprintf(name, sizeof(name), "/clouds/scan_%06d.ply", scan_number);
        std::ofstream ply(out.dir + name, std::ios::binary);
        mapping::write_point_ply(world_pts, ply);
      }
      ++scan_number;
    }
    if (k % detect_div == 0) {
      const auto detections =
          sensing::detect_artifacts(world, Pose{robot.position, robot.yaw},
                                    cfg.camera, cfg.detection_noise,
                                    detector_rng, t);
      for (const auto& det : detections) {
        const auto point = artifacts::localize_detection(
            det, est_pose, cfg.camera, map, cfg.localization_grid_n);
        if (point)
          artifacts::update_hypotheses(hypotheses, det.cls, *point,
                                       cfg.hypotheses);
      }
      emit_frozen_reports(t);
    }
    if (k % bt_div == 0) {
      const auto ids = sensing::scan_bluetooth(
          world, Pose{robot.position, robot.yaw}, cfg.bluetooth_radius);
      bluetooth_log.record(ids, est_pose, t);
    }

    // --- planning ---
    if (active_path.empty() && mode != kLanded) {
      ++metrics.planning_iterations;
      update_explored();

      planner::PlanResult anchor_only;
      anchor_only.status = planner::PlanResult::Status::NoGain;
      robot_anchor = update_global_graph(global, anchor_only, est_pose.position,
                                         map, cfg.planner, robot_anchor);

      const auto homing =
          planner::check_homing(global, est_pose.position, t, cfg.endurance_s,
                                nominal_speed, cfg.homing_margin_s);
      if (homing.return_now) {
        active_path = homing.waypoints;
        control::reset_tracking(ctrl);
        mode = kHoming;
        log_trace(t, "homing", nullptr);
      } else {
        auto plan = planner::plan_local(map, est_pose.position, aggregated,
                                        cfg.planner, planner_rng);
        if (plan.status == planner::PlanResult::Status::RootBlocked) {
          // Collision tolerance: retry assuming unknown space is traversable.
          planner::PlannerConfig relaxed = cfg.planner;
          relaxed.unknown_policy = vehicle::UnknownPolicy::Optimistic;
          plan = planner::plan_local(map, est_pose.position, aggregated,
                                     relaxed, planner_rng);
        }
        if (plan.status == planner::PlanResult::Status::Path) {
          robot_anchor = update_global_graph(global, plan, est_pose.position,
                                             map, cfg.planner, robot_anchor);
          active_path = plan.waypoints;
          control::reset_tracking(ctrl);
          mode = kLocal;
          nogain_count = 0;
          log_trace(t, "local", &plan);
        } else {
          ++nogain_count;
          log_trace(t, "local_nogain", &plan);
          if (nogain_count >= cfg.planner.k_trigger) {
            const auto repos = planner::plan_global_reposition(
                global, est_pose.position, cfg.endurance_s - t, nominal_speed,
                cfg.planner);
            if (repos.found) {
              active_path = repos.waypoints;
              control::reset_tracking(ctrl);
              mode = kGlobal;
              nogain_count = 0;
              log_trace(t, "global", nullptr);
            } else {
              // Exploration complete: no feasible frontier, go home.
              const auto go_home = planner::check_homing(
                  global, est_pose.position, cfg.endurance_s, cfg.endurance_s,
                  nominal_speed, 0.0);
              active_path = go_home.waypoints;
              control::reset_tracking(ctrl);
              mode = kHoming;
              log_trace(t, "global_nofrontier", nullptr);
            }
          }
        }
      }
      last_progress_change = t;
      last_wp_index = ctrl.waypoint_index;
      last_wp_progress = ctrl.path_progress;
    }

    // --- control & dynamics ---
    control::ControlCommand cmd;
    if (!active_path.empty()) {
      control::ControlEstimate est;
      est.position = est_pose.position;
      est.velocity = robot.velocity;
      est.yaw = est_pose.yaw;
      const auto status =
          control::track_path(ctrl, active_path, est, dt, cfg.controller, cmd);

      if (ctrl.waypoint_index != last_wp_index ||
          ctrl.path_progress != last_wp_progress) {
        last_wp_index = ctrl.waypoint_index;
        last_wp_progress = ctrl.path_progress;
        last_progress_change = t;
      } else if (t - last_progress_change > cfg.stall_timeout_s) {
        active_path.clear();  // stalled: force a replan
      }

      if (status == control::TrackStatus::Done) {
        if (mode == kHoming) {
          metrics.final_distance_to_home = (robot.position - home).norm();
          metrics.homing_success =
              metrics.final_distance_to_home <= cfg.controller.waypoint_radius;
          robot.velocity = Vec3(0.0, 0.0, 0.0);
          mode = kLanded;
          metrics.success = true;
          metrics.end_reason = "landed_home";
          metrics.flight_time = t;
          log_state(t);
          break;
        }
        active_path.clear();
      }
    }

    const Vec3 before = robot.position;
    std::vector<vehicle::CollisionEvent> events;
    robot = vehicle::step_dynamics(robot, cmd.accel, cmd.yaw_rate, dt, world,
                                   cfg.geometry, cfg.vehicle, &events);
    metrics.travelled_distance += (robot.position - before).norm();
    for (const auto& ev : events) {
      ++metrics.collision_count;
      metrics.max_impact_speed = std::max(metrics.max_impact_speed, ev.impact_speed);
    }
    if (map.maybe_shift(robot.position, cfg.mapping.shift_margin).norm() > 0.0)
      ++metrics.map_shifts;

    log_state(t);

    if (k >= max_ticks || t + dt > cfg.endurance_s + dt / 2.0) {
      metrics.flight_time = t + dt;
      metrics.success = false;
      metrics.end_reason = "endurance_exhausted";
      failed = true;
      break;
    }
  }

  // --- wrap-up ---
  update_explored();
  metrics.explored_free_voxels = map.count_state(mapping::TriState::Free);
  emit_frozen_reports(metrics.flight_time);
  result.bluetooth_reports = bluetooth_log.finalize();
  if (out.enabled)
    for (const auto& r : result.bluetooth_reports)
      write_report_line(out.bluetooth, r);

  metrics.artifact_score = score_artifacts(result.vision_reports,
                                           result.ground_truth,
                                           cfg.scoring_tolerance);

  if (out.enabled) {
    if (cfg.outputs.export_map) {
      mapping::export_tristate(map, out.dir + "/map.owlmap");
      mapping::export_occupied_ply(map, out.dir + "/map_occupied.ply");
    }
    nlohmann::json j;
    j["travelled_distance"] = metrics.travelled_distance;
    j["flight_time"] = metrics.flight_time;
    j["explored_free_voxels"] = metrics.explored_free_voxels;
    j["reachable_air_voxels"] = metrics.reachable_air_voxels;
    j["explored_fraction"] = metrics.explored_fraction;
    j["collision_count"] = metrics.collision_count;
    j["max_impact_speed"] = metrics.max_impact_speed;
    j["planning_iterations"] = metrics.planning_iterations;
    j["map_shifts"] = metrics.map_shifts;
    j["precision"] = metrics.artifact_score.precision;
    j["recall"] = metrics.artifact_score.recall;
    j["homing_success"] = metrics.homing_success;
    j["final_distance_to_home"] = metrics.final_distance_to_home;
    j["success"] = metrics.success;
    j["end_reason"] = metrics.end_reason;
    std::ofstream mf(out.dir + "/metrics.json", std::ios::binary);
    mf << j.dump(2) << '\n';
  }

  (void)failed;
  return result;
}

MissionResult run_mission(const MissionConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  if (cfg.world.kind == WorldSource::Kind::File) {
    const auto world = world::load_world(cfg.world.file);
    return run_mission_on_world(cfg, world, out_dir);
  }
  const uint64_t seed =
      cfg.world.seed ? *cfg.world.seed : mix_seed(cfg.master_seed, kSeedWorld);
  const auto world = world::generate_tunnel_world(cfg.world.tunnel, seed);
  return run_mission_on_world(cfg, world, out_dir);
}

}  // namespace owl::mission
