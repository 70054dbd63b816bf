// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/design.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ccmsynth/errors.hpp"

namespace ccm {

CellMask material_state(const HexMesh& mesh, const std::vector<Mask>& masks) {
  CellMask rho(mesh.cells.size(), 1);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Vec2 ctr = mesh.cell_centroid(c);
    for (const Mask& m : masks) {
      const double dx = ctr.x - m.x;
      const double dy = ctr.y - m.y;
      if (dx * dx + dy * dy < m.r * m.r) {
        rho[c] = 0;
        break;
      }
    }
  }
  return rho;
}

std::vector<RigidSurface> rigid_surfaces(const std::vector<Mask>& masks) {
  std::vector<RigidSurface> out;
  for (const Mask& m : masks) {
    if (m.s == 1 && m.f * m.r > 0.0) out.push_back({{m.x, m.y}, m.f * m.r});
  }
  return out;
}

void write_design(std::ostream& os, const DesignVector& v) {
  char buf[256];
  for (const Mask& m : v.masks) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %d %.17g\n", m.x, m.y, m.r, m.s, m.f);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "F %.17g\n", v.force_magnitude);
  os << buf;
}

DesignVector read_design(std::istream& is) {
  DesignVector v;
  std::string line;
  bool got_force = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == 'F') {
      char tag;
      ls >> tag >> v.force_magnitude;
      if (ls.fail()) throw IoError("malformed force line in design file");
      got_force = true;
      break;
    }
    Mask m;
    ls >> m.x >> m.y >> m.r >> m.s >> m.f;
    if (ls.fail()) throw IoError("malformed mask line in design file: " + line);
    v.masks.push_back(m);
  }
  if (!got_force) throw IoError("design file missing final force line");
  return v;
}

void save_design(const std::string& path, const DesignVector& v) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  write_design(os, v);
}

DesignVector load_design(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path);
  return read_design(is);
}

}  // namespace ccm
