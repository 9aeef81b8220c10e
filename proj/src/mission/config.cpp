#include "owl/mission/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace owl::mission {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError("config: " + ctx + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("config: unknown key '" + key + "' in " + ctx);
  }
}

template <typename T>
void get_to(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) {
    try {
      obj.at(key).get_to(target);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: bad value for '") + key +
                        "': " + e.what());
    }
  }
}

void get_vec3(const json& obj, const char* key, Vec3& target) {
  if (!obj.contains(key)) return;
  const auto& a = obj.at(key);
  if (!a.is_array() || a.size() != 3)
    throw ConfigError(std::string("config: '") + key + "' must be [x, y, z]");
  target = Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

void get_vec3i(const json& obj, const char* key, Vec3i& target) {
  if (!obj.contains(key)) return;
  const auto& a = obj.at(key);
  if (!a.is_array() || a.size() != 3)
    throw ConfigError(std::string("config: '") + key + "' must be [nx, ny, nz]");
  target = Vec3i(a[0].get<int>(), a[1].get<int>(), a[2].get<int>());
}

world::TunnelSpec parse_tunnel(const json& j) {
  check_keys(j, {"dims", "voxel_edge", "segments", "segment_min_len",
                 "segment_max_len", "min_width", "max_width", "min_height",
                 "max_height", "branch_prob", "turn_prob", "climb_prob",
                 "room_width", "room_height", "gallery_count", "gallery_width",
                 "gallery_height", "artifact_count", "artifact_bluetooth",
                 "artifact_min_separation"},
             "world.tunnel");
  world::TunnelSpec s;
  get_vec3i(j, "dims", s.dims);
  get_to(j, "voxel_edge", s.voxel_edge);
  get_to(j, "segments", s.segments);
  get_to(j, "segment_min_len", s.segment_min_len);
  get_to(j, "segment_max_len", s.segment_max_len);
  get_to(j, "min_width", s.min_width);
  get_to(j, "max_width", s.max_width);
  get_to(j, "min_height", s.min_height);
  get_to(j, "max_height", s.max_height);
  get_to(j, "branch_prob", s.branch_prob);
  get_to(j, "turn_prob", s.turn_prob);
  get_to(j, "climb_prob", s.climb_prob);
  get_to(j, "room_width", s.room_width);
  get_to(j, "room_height", s.room_height);
  get_to(j, "gallery_count", s.gallery_count);
  get_to(j, "gallery_width", s.gallery_width);
  get_to(j, "gallery_height", s.gallery_height);
  get_to(j, "artifact_count", s.artifact_count);
  get_to(j, "artifact_bluetooth", s.artifact_bluetooth);
  get_to(j, "artifact_min_separation", s.artifact_min_separation);
  return s;
}

void parse_world(const json& j, WorldSource& w) {
  check_keys(j, {"source", "tunnel", "seed", "file"}, "world");
  std::string source = "generate";
  get_to(j, "source", source);
  if (source == "generate")
    w.kind = WorldSource::Kind::Generate;
  else if (source == "file")
    w.kind = WorldSource::Kind::File;
  else
    throw ConfigError("config: world.source must be 'generate' or 'file'");
  if (j.contains("tunnel")) w.tunnel = parse_tunnel(j.at("tunnel"));
  if (j.contains("seed")) w.seed = j.at("seed").get<uint64_t>();
  get_to(j, "file", w.file);
  if (w.kind == WorldSource::Kind::File && w.file.empty())
    throw ConfigError("config: world.source 'file' requires world.file");
}

void parse_lidar(const json& j, sensing::LidarModel& m) {
  check_keys(j, {"fov_azimuth_deg", "fov_elevation_deg", "channels",
                 "native_channels", "azimuth_steps", "max_range", "rate_hz",
                 "range_noise_sigma"},
             "lidar");
  get_to(j, "fov_azimuth_deg", m.fov_azimuth_deg);
  get_to(j, "fov_elevation_deg", m.fov_elevation_deg);
  get_to(j, "channels", m.channels);
  get_to(j, "native_channels", m.native_channels);
  get_to(j, "azimuth_steps", m.azimuth_steps);
  get_to(j, "max_range", m.max_range);
  get_to(j, "rate_hz", m.rate_hz);
  get_to(j, "range_noise_sigma", m.range_noise_sigma);
}

void parse_camera(const json& j, sensing::CameraModel& c) {
  check_keys(j, {"fov_h_deg", "fov_v_deg", "image_w", "image_h",
                 "max_detect_range", "rate_hz", "nominal_artifact_radius"},
             "camera");
  get_to(j, "fov_h_deg", c.fov_h_deg);
  get_to(j, "fov_v_deg", c.fov_v_deg);
  get_to(j, "image_w", c.image_w);
  get_to(j, "image_h", c.image_h);
  get_to(j, "max_detect_range", c.max_detect_range);
  get_to(j, "rate_hz", c.rate_hz);
  get_to(j, "nominal_artifact_radius", c.nominal_artifact_radius);
}

void parse_detection_noise(const json& j, sensing::DetectionNoise& n) {
  check_keys(j, {"p_miss", "p_misclass", "false_positives_per_frame",
                 "bbox_jitter_px"},
             "detection_noise");
  get_to(j, "p_miss", n.p_miss);
  get_to(j, "p_misclass", n.p_misclass);
  get_to(j, "false_positives_per_frame", n.false_positives_per_frame);
  get_to(j, "bbox_jitter_px", n.bbox_jitter_px);
}

void parse_odometry(const json& j, sensing::OdomNoise& n) {
  check_keys(j, {"white_sigma_xyz", "white_sigma_yaw", "drift_sigma_xyz"},
             "odometry");
  get_to(j, "white_sigma_xyz", n.white_sigma_xyz);
  get_to(j, "white_sigma_yaw", n.white_sigma_yaw);
  get_to(j, "drift_sigma_xyz", n.drift_sigma_xyz);
}

void parse_mapping(const json& j, MappingConfig& m) {
  check_keys(j, {"voxel_edge", "extent", "shift_margin", "pad", "l_hit",
                 "l_miss", "l_min", "l_max", "l_occ_thresh", "l_free_thresh"},
             "mapping");
  get_to(j, "voxel_edge", m.voxel_edge);
  get_vec3(j, "extent", m.extent);
  get_to(j, "shift_margin", m.shift_margin);
  get_to(j, "pad", m.pad);
  get_to(j, "l_hit", m.thresholds.l_hit);
  get_to(j, "l_miss", m.thresholds.l_miss);
  get_to(j, "l_min", m.thresholds.l_min);
  get_to(j, "l_max", m.thresholds.l_max);
  get_to(j, "l_occ_thresh", m.thresholds.l_occ_thresh);
  get_to(j, "l_free_thresh", m.thresholds.l_free_thresh);
}

void parse_vehicle(const json& j, vehicle::RobotGeometry& g,
                   vehicle::VehicleConfig& v) {
  check_keys(j, {"cuboid_extent", "max_speed", "penetration_tolerance"},
             "vehicle");
  get_vec3(j, "cuboid_extent", g.cuboid_extent);
  get_to(j, "max_speed", v.max_speed);
  get_to(j, "penetration_tolerance", v.penetration_tolerance);
}

void parse_controller(const json& j, control::ControllerConfig& c) {
  check_keys(j, {"kp", "ki", "kd", "kp_yaw", "i_min", "i_max",
                 "waypoint_radius", "reference_speed"},
             "controller");
  get_vec3(j, "kp", c.kp);
  get_vec3(j, "ki", c.ki);
  get_vec3(j, "kd", c.kd);
  get_to(j, "kp_yaw", c.kp_yaw);
  get_vec3(j, "i_min", c.i_min);
  get_vec3(j, "i_max", c.i_max);
  get_to(j, "waypoint_radius", c.waypoint_radius);
  get_to(j, "reference_speed", c.reference_speed);
}

void parse_planner(const json& j, planner::PlannerConfig& p) {
  check_keys(j, {"epsilon_g", "rho", "k_trigger", "gain_threshold_voxels",
                 "frontier_threshold_voxels", "local_box_min", "local_box_max",
                 "num_samples", "edge_radius", "unknown_policy",
                 "leaf_only_gain", "lambda_discount", "gain_fov_azimuth_deg",
                 "gain_fov_elevation_deg", "gain_range",
                 "safety_clearance_radius"},
             "planner");
  get_to(j, "epsilon_g", p.epsilon_g);
  get_to(j, "rho", p.rho);
  get_to(j, "k_trigger", p.k_trigger);
  get_to(j, "gain_threshold_voxels", p.gain_threshold_voxels);
  get_to(j, "frontier_threshold_voxels", p.frontier_threshold_voxels);
  get_vec3(j, "local_box_min", p.local_box_min);
  get_vec3(j, "local_box_max", p.local_box_max);
  get_to(j, "num_samples", p.num_samples);
  get_to(j, "edge_radius", p.edge_radius);
  if (j.contains("unknown_policy")) {
    const std::string s = j.at("unknown_policy").get<std::string>();
    if (s == "strict")
      p.unknown_policy = vehicle::UnknownPolicy::Strict;
    else if (s == "optimistic")
      p.unknown_policy = vehicle::UnknownPolicy::Optimistic;
    else
      throw ConfigError("config: planner.unknown_policy must be 'strict' or 'optimistic'");
  }
  get_to(j, "leaf_only_gain", p.leaf_only_gain);
  get_to(j, "lambda_discount", p.lambda_discount);
  get_to(j, "gain_fov_azimuth_deg", p.gain_sensor.fov_azimuth_deg);
  get_to(j, "gain_fov_elevation_deg", p.gain_sensor.fov_elevation_deg);
  get_to(j, "gain_range", p.gain_sensor.range);
  get_to(j, "safety_clearance_radius", p.safety_clearance_radius);
}

void parse_hypotheses(const json& j, artifacts::HypothesisConfig& h) {
  check_keys(j, {"sphere_radius", "p_true_pos", "p_false_pos",
                 "freeze_threshold"},
             "artifacts");
  get_to(j, "sphere_radius", h.sphere_radius);
  get_to(j, "p_true_pos", h.p_true_pos);
  get_to(j, "p_false_pos", h.p_false_pos);
  if (j.contains("freeze_threshold")) {
    const auto& t = j.at("freeze_threshold");
    if (t.is_number()) {
      h.freeze_threshold.fill(t.get<double>());
    } else if (t.is_object()) {
      for (const auto& [key, value] : t.items()) {
        const auto cls = world::artifact_class_from_name(key);
        if (!cls) throw ConfigError("config: unknown artifact class '" + key + "'");
        h.freeze_threshold[static_cast<size_t>(*cls)] = value.get<double>();
      }
    } else {
      throw ConfigError("config: artifacts.freeze_threshold must be a number or per-class object");
    }
  }
}

void parse_outputs(const json& j, OutputConfig& o) {
  check_keys(j, {"dump_clouds", "export_map"}, "outputs");
  get_to(j, "dump_clouds", o.dump_clouds);
  get_to(j, "export_map", o.export_map);
}

MissionConfig parse_root(const json& j) {
  check_keys(j,
             {"world", "endurance_s", "sim_dt", "master_seed", "takeoff_height",
              "lidar", "camera", "detection_noise", "odometry",
              "bluetooth_radius", "bluetooth_rate_hz", "mapping", "vehicle",
              "controller", "planner", "artifacts", "localization_grid_n",
              "homing_margin_s", "stall_timeout_s", "aggregated_scans",
              "scoring_tolerance", "outputs"},
             "mission config");
  MissionConfig cfg;
  if (j.contains("world")) parse_world(j.at("world"), cfg.world);
  get_to(j, "endurance_s", cfg.endurance_s);
  get_to(j, "sim_dt", cfg.sim_dt);
  get_to(j, "master_seed", cfg.master_seed);
  get_to(j, "takeoff_height", cfg.takeoff_height);
  if (j.contains("lidar")) parse_lidar(j.at("lidar"), cfg.lidar);
  if (j.contains("camera")) parse_camera(j.at("camera"), cfg.camera);
  if (j.contains("detection_noise"))
    parse_detection_noise(j.at("detection_noise"), cfg.detection_noise);
  if (j.contains("odometry")) parse_odometry(j.at("odometry"), cfg.odometry);
  get_to(j, "bluetooth_radius", cfg.bluetooth_radius);
  get_to(j, "bluetooth_rate_hz", cfg.bluetooth_rate_hz);
  if (j.contains("mapping")) parse_mapping(j.at("mapping"), cfg.mapping);
  if (j.contains("vehicle")) parse_vehicle(j.at("vehicle"), cfg.geometry, cfg.vehicle);
  if (j.contains("controller")) parse_controller(j.at("controller"), cfg.controller);
  if (j.contains("planner")) parse_planner(j.at("planner"), cfg.planner);
  if (j.contains("artifacts")) parse_hypotheses(j.at("artifacts"), cfg.hypotheses);
  get_to(j, "localization_grid_n", cfg.localization_grid_n);
  get_to(j, "homing_margin_s", cfg.homing_margin_s);
  get_to(j, "stall_timeout_s", cfg.stall_timeout_s);
  get_to(j, "aggregated_scans", cfg.aggregated_scans);
  get_to(j, "scoring_tolerance", cfg.scoring_tolerance);
  if (j.contains("outputs")) parse_outputs(j.at("outputs"), cfg.outputs);
  cfg.validate();
  return cfg;
}

}  // namespace

void MissionConfig::validate() const {
  if (endurance_s < 0.0) throw ConfigError("config: endurance_s must be >= 0");
  if (sim_dt <= 0.0 || sim_dt > 0.1)
    throw ConfigError("config: sim_dt must be in (0, 0.1]");
  lidar.validate();
  camera.validate();
  mapping.thresholds.validate();
  if (mapping.voxel_edge <= 0.0)
    throw ConfigError("config: mapping.voxel_edge must be > 0");
  geometry.validate();
  controller.validate();
  planner.validate();
  hypotheses.validate();
  if (localization_grid_n < 2)
    throw ConfigError("config: localization_grid_n must be >= 2");
  if (bluetooth_radius <= 0.0)
    throw ConfigError("config: bluetooth_radius must be > 0");

  // Sensor rates must land on simulation ticks.
  for (const auto& [name, rate] :
       {std::pair<const char*, double>{"lidar", lidar.rate_hz},
        {"camera", camera.rate_hz},
        {"bluetooth", bluetooth_rate_hz}}) {
    if (rate <= 0.0)
      throw ConfigError(std::string("config: ") + name + " rate must be > 0");
    const double ticks = 1.0 / (rate * sim_dt);
    if (std::abs(ticks - std::lround(ticks)) > 1e-6)
      throw ConfigError(std::string("config: ") + name +
                        " rate must divide the simulation tick rate");
  }
}

MissionConfig parse_mission_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  return parse_root(j);
}

MissionConfig load_mission_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_mission_config(ss.str());
}

world::TunnelSpec load_tunnel_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  return parse_tunnel(j);
}

}  // namespace owl::mission
