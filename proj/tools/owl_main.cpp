#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "owl/mapping/map_io.hpp"
#include "owl/mission/runner.hpp"
#include "owl/world/tunnel.hpp"
#include "owl/world/world_io.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 mission failure (endurance
// exhaustion), 4 internal invariant violation.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMissionFailure = 3;
constexpr int kExitInvariant = 4;

int cmd_run(const std::string& config_path, std::optional<uint64_t> seed,
            const std::string& out_dir) {
  auto cfg = owl::mission::load_mission_config(config_path);
  if (seed) cfg.master_seed = *seed;
  const auto result = owl::mission::run_mission(cfg, out_dir);
  const auto& m = result.metrics;
  std::printf("end_reason            %s\n", m.end_reason.c_str());
  std::printf("flight_time           %.2f s\n", m.flight_time);
  std::printf("travelled_distance    %.2f m\n", m.travelled_distance);
  std::printf("explored_fraction     %.3f\n", m.explored_fraction);
  std::printf("collisions            %d (max impact %.2f m/s)\n",
              m.collision_count, m.max_impact_speed);
  std::printf("artifact reports      %d true / %d false (precision %.2f, recall %.2f)\n",
              m.artifact_score.true_positives, m.artifact_score.false_positives,
              m.artifact_score.precision, m.artifact_score.recall);
  std::printf("homing                %s (final distance %.2f m)\n",
              m.homing_success ? "ok" : "no", m.final_distance_to_home);
  return m.success ? kExitOk : kExitMissionFailure;
}

int cmd_genworld(const std::string& spec_path, uint64_t seed,
                 const std::string& out_path) {
  const auto spec = owl::mission::load_tunnel_spec(spec_path);
  const auto world = owl::world::generate_tunnel_world(spec, seed);
  owl::world::save_world(world, out_path);
  size_t air = world.air_cell_count();
  std::printf("world %dx%dx%d voxels, %zu air cells, %zu artifacts -> %s\n",
              world.dims().x(), world.dims().y(), world.dims().z(), air,
              world.artifacts().size(), out_path.c_str());
  return kExitOk;
}

int cmd_score(const std::string& reports_path, const std::string& world_path,
              double tol) {
  const auto world = owl::world::load_world(world_path);
  std::ifstream f(reports_path);
  if (!f) throw owl::ConfigError("cannot open reports file: " + reports_path);
  std::vector<owl::artifacts::ArtifactReport> reports;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    owl::artifacts::ArtifactReport r;
    const auto cls = owl::world::artifact_class_from_name(j.at("class"));
    if (!cls) throw owl::ParseError("reports: unknown class in line: " + line);
    r.cls = *cls;
    r.location = owl::Vec3(j.at("x"), j.at("y"), j.at("z"));
    reports.push_back(r);
  }
  const auto score = owl::mission::score_artifacts(reports, world.artifacts(), tol);
  std::printf("reports %zu, ground truth %d\n", reports.size(),
              score.ground_truth_count);
  std::printf("true_positives  %d\nfalse_positives %d\n", score.true_positives,
              score.false_positives);
  std::printf("precision %.3f\nrecall    %.3f\n", score.precision, score.recall);
  return kExitOk;
}

int cmd_export_map(const std::string& run_dir, const std::string& format) {
  if (format != "ply") throw owl::ConfigError("export-map: only 'ply' is supported");
  std::ifstream in(run_dir + "/map.owlmap", std::ios::binary);
  if (!in) throw owl::ConfigError("export-map: no map.owlmap in " + run_dir);
  std::ofstream out(run_dir + "/map.ply", std::ios::binary);
  owl::mapping::owlmap_to_ply(in, out);
  std::printf("wrote %s/map.ply\n", run_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"owl: headless subterranean exploration simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<uint64_t> seed;
  auto* run = app.add_subcommand("run", "run a mission from a config file");
  run->add_option("--config", config_path, "mission config JSON")->required();
  run->add_option("--seed", seed, "override the master seed");
  run->add_option("--out", out_dir, "output directory");

  std::string spec_path, world_out;
  uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("genworld", "generate a tunnel world file");
  gen->add_option("--spec", spec_path, "tunnel spec JSON")->required();
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--out", world_out, "output world file")->required();

  std::string reports_path, world_path;
  double tol = 2.0;
  auto* score = app.add_subcommand("score", "score artifact reports against a world");
  score->add_option("--reports", reports_path, "artifact reports JSONL")->required();
  score->add_option("--world", world_path, "world file")->required();
  score->add_option("--tol", tol, "match tolerance in meters");

  std::string run_dir, format = "ply";
  auto* exp = app.add_subcommand("export-map", "convert a run's map dump to PLY");
  exp->add_option("--run", run_dir, "run output directory")->required();
  exp->add_option("--format", format, "export format");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir);
    if (gen->parsed()) return cmd_genworld(spec_path, gen_seed, world_out);
    if (score->parsed()) return cmd_score(reports_path, world_path, tol);
    if (exp->parsed()) return cmd_export_map(run_dir, format);
  } catch (const owl::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const owl::GenerationError& e) {
    std::fprintf(stderr, "generation error: %s\n", e.what());
    return kExitConfig;
  } catch (const owl::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitConfig;
  } catch (const owl::InvariantError& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvariant;
  }
  return kExitOk;
}
