#include "owl/world/world_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace owl::world {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ParseError("world file, line " + std::to_string(line) + ": " + what);
}

}  // namespace

void save_world(const WorldGrid& world, std::ostream& out) {
  out << "OWLWORLD 1\n";
  out << "ORIGIN " << fmt_double(world.origin().x()) << ' '
      << fmt_double(world.origin().y()) << ' ' << fmt_double(world.origin().z())
      << '\n';
  out << "VOXEL " << fmt_double(world.voxel_edge()) << '\n';
  out << "DIMS " << world.dims().x() << ' ' << world.dims().y() << ' '
      << world.dims().z() << '\n';
  out << "START " << world.start_cell().x() << ' ' << world.start_cell().y()
      << ' ' << world.start_cell().z() << '\n';
  for (const auto& a : world.artifacts()) {
    out << "ARTIFACT " << a.id << ' ' << artifact_class_name(a.cls) << ' '
        << fmt_double(a.center.x()) << ' ' << fmt_double(a.center.y()) << ' '
        << fmt_double(a.center.z()) << ' ' << (a.bluetooth ? 1 : 0) << '\n';
  }
  out << "PAYLOAD\n";
  // Run-length encoding in x-fastest order, 8 runs per line.
  const auto& cells = world.cells();
  size_t i = 0;
  int on_line = 0;
  while (i < cells.size()) {
    size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    out << (cells[i] == Cell::Solid ? 'S' : 'A') << (j - i);
    if (++on_line == 8) {
      out << '\n';
      on_line = 0;
    } else if (j < cells.size()) {
      out << ' ';
    }
    i = j;
  }
  if (on_line != 0) out << '\n';
  out << "END\n";
}

void save_world(const WorldGrid& world, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open world file for writing: " + path);
  save_world(world, f);
}

WorldGrid load_world(std::istream& in) {
  int line_no = 0;
  auto next_line = [&](std::string& line) {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  std::string line;
  if (!next_line(line) || line != "OWLWORLD 1")
    fail(line_no, "expected magic 'OWLWORLD 1'");

  Vec3 origin;
  double edge = 0.0;
  Vec3i dims(0, 0, 0), start(0, 0, 0);
  std::vector<GroundTruthArtifact> artifacts;
  bool have_origin = false, have_voxel = false, have_dims = false,
       have_start = false;

  while (true) {
    if (!next_line(line)) fail(line_no, "unexpected end of file in header");
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "PAYLOAD") break;
    if (tag == "ORIGIN") {
      if (!(ss >> origin.x() >> origin.y() >> origin.z()))
        fail(line_no, "malformed ORIGIN");
      have_origin = true;
    } else if (tag == "VOXEL") {
      if (!(ss >> edge)) fail(line_no, "malformed VOXEL");
      have_voxel = true;
    } else if (tag == "DIMS") {
      if (!(ss >> dims.x() >> dims.y() >> dims.z()))
        fail(line_no, "malformed DIMS");
      have_dims = true;
    } else if (tag == "START") {
      if (!(ss >> start.x() >> start.y() >> start.z()))
        fail(line_no, "malformed START");
      have_start = true;
    } else if (tag == "ARTIFACT") {
      GroundTruthArtifact a;
      std::string cls;
      int bt = 0;
      if (!(ss >> a.id >> cls >> a.center.x() >> a.center.y() >> a.center.z() >>
            bt))
        fail(line_no, "malformed ARTIFACT record");
      const auto parsed = artifact_class_from_name(cls);
      if (!parsed) fail(line_no, "unknown artifact class '" + cls + "'");
      a.cls = *parsed;
      a.bluetooth = bt != 0;
      artifacts.push_back(a);
    } else {
      fail(line_no, "unknown header tag '" + tag + "'");
    }
  }
  if (!have_origin) fail(line_no, "missing ORIGIN");
  if (!have_voxel) fail(line_no, "missing VOXEL");
  if (!have_dims) fail(line_no, "missing DIMS");
  if (!have_start) fail(line_no, "missing START");
  if (dims.x() <= 0 || dims.y() <= 0 || dims.z() <= 0)
    fail(line_no, "DIMS must be positive");

  const size_t total = static_cast<size_t>(dims.x()) * dims.y() * dims.z();
  std::vector<Cell> cells;
  cells.reserve(total);
  bool done = false;
  while (!done) {
    if (!next_line(line)) fail(line_no, "unexpected end of file in payload");
    if (line == "END") {
      done = true;
      break;
    }
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      if (tok.size() < 2 || (tok[0] != 'S' && tok[0] != 'A'))
        fail(line_no, "bad run token '" + tok + "'");
      uint64_t count = 0;
      try {
        count = std::stoull(tok.substr(1));
      } catch (const std::exception&) {
        fail(line_no, "bad run length in token '" + tok + "'");
      }
      if (count == 0 || cells.size() + count > total)
        fail(line_no, "run length overflows dims product");
      cells.insert(cells.end(), count,
                   tok[0] == 'S' ? Cell::Solid : Cell::Air);
    }
  }
  if (cells.size() != total)
    fail(line_no, "payload holds " + std::to_string(cells.size()) +
                      " cells, dims expect " + std::to_string(total));

  // WorldGrid's constructor re-checks every invariant.
  return WorldGrid(origin, edge, dims, std::move(cells), std::move(artifacts),
                   start);
}

WorldGrid load_world(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open world file: " + path);
  return load_world(f);
}

}  // namespace owl::world
