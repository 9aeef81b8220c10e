#include "owl/mapping/map_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace owl::mapping {

namespace {

void write_ply_header(std::ostream& out, size_t n) {
  out << "ply\nformat ascii 1.0\nelement vertex " << n
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void write_point_ply(const std::vector<Vec3>& points, std::ostream& out) {
  write_ply_header(out, points.size());
  for (const auto& p : points)
    out << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z()) << '\n';
}

void export_occupied_ply(const OccupancyMap& map, std::ostream& out) {
  std::vector<Vec3> pts;
  map.for_each_cell([&](const Vec3i& c, TriState s) {
    if (s == TriState::Occupied) pts.push_back(map.cell_center(c));
  });
  write_point_ply(pts, out);
}

void export_occupied_ply(const OccupancyMap& map, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open PLY output: " + path);
  export_occupied_ply(map, f);
}

void export_tristate(const OccupancyMap& map, std::ostream& out) {
  const Vec3 o = map.window_min();
  out << "OWLMAP 1\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "ORIGIN %.17g %.17g %.17g\n", o.x(), o.y(), o.z());
  out << buf;
  std::snprintf(buf, sizeof(buf), "VOXEL %.17g\n", map.voxel_edge());
  out << buf;
  out << "DIMS " << map.dims().x() << ' ' << map.dims().y() << ' '
      << map.dims().z() << "\nPAYLOAD\n";

  const char symbol[3] = {'U', 'F', 'O'};
  char run_sym = 0;
  size_t run_len = 0;
  int on_line = 0;
  auto flush = [&]() {
    if (run_len == 0) return;
    out << run_sym << run_len;
    if (++on_line == 8) {
      out << '\n';
      on_line = 0;
    } else {
      out << ' ';
    }
  };
  map.for_each_cell([&](const Vec3i&, TriState s) {
    const char sym = symbol[static_cast<int>(s)];
    if (sym == run_sym) {
      ++run_len;
    } else {
      flush();
      run_sym = sym;
      run_len = 1;
    }
  });
  flush();
  if (on_line != 0) out << '\n';
  out << "END\n";
}

void export_tristate(const OccupancyMap& map, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open map dump output: " + path);
  export_tristate(map, f);
}

void owlmap_to_ply(std::istream& in, std::ostream& out) {
  std::string line;
  if (!std::getline(in, line) || line != "OWLMAP 1")
    throw ParseError("map dump: expected magic 'OWLMAP 1'");
  Vec3 origin(0, 0, 0);
  double edge = 0.0;
  Vec3i dims(0, 0, 0);
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "PAYLOAD") break;
    if (tag == "ORIGIN")
      ss >> origin.x() >> origin.y() >> origin.z();
    else if (tag == "VOXEL")
      ss >> edge;
    else if (tag == "DIMS")
      ss >> dims.x() >> dims.y() >> dims.z();
    else
      throw ParseError("map dump: unknown header tag '" + tag + "'");
  }
  if (edge <= 0.0 || dims.minCoeff() <= 0)
    throw ParseError("map dump: missing or invalid header fields");

  std::vector<Vec3> pts;
  size_t flat = 0;
  const size_t total = static_cast<size_t>(dims.x()) * dims.y() * dims.z();
  while (std::getline(in, line) && line != "END") {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      if (tok.size() < 2) throw ParseError("map dump: bad run token '" + tok + "'");
      const char sym = tok[0];
      const size_t count = std::stoull(tok.substr(1));
      if (flat + count > total) throw ParseError("map dump: payload overflow");
      if (sym == 'O') {
        for (size_t k = flat; k < flat + count; ++k) {
          const int x = static_cast<int>(k % dims.x());
          const int y = static_cast<int>((k / dims.x()) % dims.y());
          const int z = static_cast<int>(k / (static_cast<size_t>(dims.x()) * dims.y()));
          pts.push_back(origin + edge * (Vec3(x, y, z) + Vec3(0.5, 0.5, 0.5)));
        }
      }
      flat += count;
    }
  }
  if (flat != total) throw ParseError("map dump: payload does not match dims");
  write_point_ply(pts, out);
}

}  // namespace owl::mapping
