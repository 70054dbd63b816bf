// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/svg.hpp"

#include <algorithm>
#include <fstream>

#include "ccmsynth/errors.hpp"

namespace ccm {

namespace {

struct SvgCanvas {
  std::ofstream os;
  double y_flip;  // svg y grows downward

  SvgCanvas(const std::string& file, double x0, double y0, double x1, double y1)
      : os(file) {
    if (!os) throw IoError("cannot write " + file);
    const double margin = 0.05 * std::max(x1 - x0, y1 - y0) + 1.0;
    x0 -= margin; y0 -= margin; x1 += margin; y1 += margin;
    y_flip = y0 + y1;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << ' ' << y0
       << ' ' << (x1 - x0) << ' ' << (y1 - y0) << "\" width=\"800\" height=\""
       << 800.0 * (y1 - y0) / (x1 - x0) << "\">\n";
  }
  ~SvgCanvas() { os << "</svg>\n"; }

  double fy(double y) const { return y_flip - y; }

  void polygon(const std::vector<Vec2>& pts, const std::string& style) {
    os << "<polygon points=\"";
    for (const Vec2& p : pts) os << p.x << ',' << fy(p.y) << ' ';
    os << "\" style=\"" << style << "\"/>\n";
  }
  void polyline(const std::vector<Vec2>& pts, const std::string& style) {
    os << "<polyline points=\"";
    for (const Vec2& p : pts) os << p.x << ',' << fy(p.y) << ' ';
    os << "\" style=\"" << style << "\"/>\n";
  }
  void circle(Vec2 c, double r, const std::string& style) {
    os << "<circle cx=\"" << c.x << "\" cy=\"" << fy(c.y) << "\" r=\"" << r
       << "\" style=\"" << style << "\"/>\n";
  }
};

void bounds_of(const std::vector<Vec2>& pts, double& x0, double& y0, double& x1, double& y1) {
  for (const Vec2& p : pts) {
    x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
  }
}

}  // namespace

void write_topology_svg(const std::string& file, const Continuum& continuum,
                        const std::vector<Mask>& masks) {
  const HexMesh& mesh = *continuum.mesh;
  double x0 = 0.0, y0 = 0.0, x1 = mesh.domain_size.x, y1 = mesh.domain_size.y;
  SvgCanvas svg(file, x0, y0, x1, y1);

  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (!continuum.retained[c]) continue;
    svg.polygon(continuum.cell_polygon(c), "fill:#9aa7b5;stroke:none");
  }
  for (const auto& loop : continuum.boundary.loops) {
    std::vector<Vec2> pts;
    for (int n : loop.nodes) pts.push_back(continuum.coords[n]);
    pts.push_back(pts.front());
    svg.polyline(pts, "fill:none;stroke:#1b2c40;stroke-width:0.12");
  }
  for (const Mask& m : masks) {
    svg.circle({m.x, m.y}, m.r, "fill:none;stroke:#c06060;stroke-width:0.08;stroke-dasharray:0.4,0.3");
  }
  for (const RigidSurface& s : continuum.surfaces) {
    svg.circle(s.center, s.radius, "fill:#303030;stroke:none");
  }
  if (continuum.ports.input_node >= 0)
    svg.circle(continuum.coords[continuum.ports.input_node], 0.35, "fill:#2a7f3f");
  if (continuum.ports.output_node >= 0)
    svg.circle(continuum.coords[continuum.ports.output_node], 0.35, "fill:#b8860b");
  for (int n : continuum.ports.fixed_nodes)
    svg.circle(continuum.coords[n], 0.2, "fill:#8b1a1a");
}

void write_deformed_svg(const std::string& file, const Continuum& continuum,
                        const std::vector<Vec2>& positions,
                        const std::vector<Vec2>& path) {
  const HexMesh& mesh = *continuum.mesh;
  double x0 = 0.0, y0 = 0.0, x1 = mesh.domain_size.x, y1 = mesh.domain_size.y;
  bounds_of(positions, x0, y0, x1, y1);
  if (!path.empty()) bounds_of(path, x0, y0, x1, y1);
  SvgCanvas svg(file, x0, y0, x1, y1);

  // Undeformed outline for reference, then the deformed boundary.
  for (const auto& loop : continuum.boundary.loops) {
    std::vector<Vec2> ref, cur;
    for (int n : loop.nodes) {
      ref.push_back(continuum.coords[n]);
      cur.push_back(positions[n]);
    }
    ref.push_back(ref.front());
    cur.push_back(cur.front());
    svg.polyline(ref, "fill:none;stroke:#c8c8c8;stroke-width:0.08");
    svg.polyline(cur, "fill:none;stroke:#1c4f9c;stroke-width:0.14");
  }
  for (const RigidSurface& s : continuum.surfaces) {
    svg.circle(s.center, s.radius, "fill:#303030;stroke:none");
  }
  if (path.size() >= 2)
    svg.polyline(path, "fill:none;stroke:#c2401c;stroke-width:0.16");
}

}  // namespace ccm
