// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include "ccmsynth/errors.hpp"
#include "ccmsynth/mvc.hpp"
#include "ccmsynth/quadrature.hpp"

namespace ccm {

namespace {

// Reference-cell MVC gradients at the flip-check quadrature points.
// All cells share the regular flat-top hexagon shape up to translation, so
// this is computed once per circumradius.
struct FlipCheckTable {
  std::vector<std::array<Vec2, 6>> grads;  // per gp, per node
};

FlipCheckTable flip_table(double R) {
  const double h = std::sqrt(3.0) / 2.0 * R;
  const std::array<Vec2, 6> ref = {{{R, 0.0}, {0.5 * R, h}, {-0.5 * R, h},
                                    {-R, 0.0}, {-0.5 * R, -h}, {0.5 * R, -h}}};
  const PolygonQuadrature q = polygon_fan_quadrature(ref.data(), 6, triangle_rule(7));
  FlipCheckTable table;
  std::vector<double> vals;
  std::vector<Vec2> grads;
  for (const Vec2& p : q.points) {
    mvc_shape(std::span<const Vec2>(ref.data(), 6), p, vals, grads);
    std::array<Vec2, 6> g;
    for (int i = 0; i < 6; ++i) g[i] = grads[i];
    table.grads.push_back(g);
  }
  return table;
}

// det of J = sum_I x_I (dN_I)^T for the regular -> current map. The
// regular cell is centered anywhere (MVC gradients are translation
// invariant), so current coordinates are used directly.
double cell_min_det(const Continuum& c, int cell, const FlipCheckTable& table) {
  double min_det = std::numeric_limits<double>::max();
  for (const auto& g : table.grads) {
    double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
    for (int i = 0; i < 6; ++i) {
      const Vec2 x = c.coords[c.mesh->cells[cell][i]];
      j11 += x.x * g[i].x;
      j12 += x.x * g[i].y;
      j21 += x.y * g[i].x;
      j22 += x.y * g[i].y;
    }
    min_det = std::min(min_det, j11 * j22 - j12 * j21);
  }
  return min_det;
}

std::vector<int> boundary_touching_cells(const Continuum& c) {
  std::vector<std::uint8_t> node_on_boundary(c.mesh->node_count(), 0);
  for (const auto& loop : c.boundary.loops)
    for (int n : loop.nodes) node_on_boundary[n] = 1;
  std::vector<int> out;
  for (int cell = 0; cell < c.mesh->cell_count(); ++cell) {
    if (!c.retained[cell]) continue;
    for (int n : c.mesh->cells[cell]) {
      if (node_on_boundary[n]) {
        out.push_back(cell);
        break;
      }
    }
  }
  return out;
}

}  // namespace

int Continuum::retained_count() const {
  return static_cast<int>(std::count(retained.begin(), retained.end(), std::uint8_t(1)));
}

double Continuum::volume_fraction() const {
  return static_cast<double>(retained_count()) / static_cast<double>(mesh->cell_count());
}

double Continuum::mean_boundary_edge() const {
  double len = 0.0;
  int n = 0;
  for (const auto& loop : boundary.loops) {
    const int m = loop.size();
    for (int k = 0; k < m; ++k) {
      len += norm(coords[loop.nodes[(k + 1) % m]] - coords[loop.nodes[k]]);
      ++n;
    }
  }
  return n ? len / n : 0.0;
}

std::vector<Vec2> Continuum::cell_polygon(int cell) const {
  std::vector<Vec2> poly(6);
  for (int k = 0; k < 6; ++k) poly[k] = coords[mesh->cells[cell][k]];
  return poly;
}

Continuum make_continuum(const HexMesh& mesh, CellMask retained,
                         std::vector<RigidSurface> surfaces, Attachments ports) {
  Continuum c;
  c.mesh = &mesh;
  c.retained = std::move(retained);
  if (c.retained_count() == 0) throw EmptyContinuum();
  c.coords = mesh.nodes;
  c.boundary = extract_boundary(mesh, c.retained);
  c.surfaces = std::move(surfaces);
  c.ports = std::move(ports);
  return c;
}

Continuum smooth_boundary(Continuum continuum, int beta) {
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (beta == 0) return continuum;

  const FlipCheckTable table = flip_table(continuum.mesh->circumradius);
  const std::vector<int> check_cells = boundary_touching_cells(continuum);

  for (int step = 1; step <= beta; ++step) {
    const std::vector<Vec2> snapshot = continuum.coords;
    for (const auto& loop : continuum.boundary.loops) {
      const int m = loop.size();
      if (m < 3) continue;
      for (int k = 0; k < m; ++k) {
        const int node = loop.nodes[k];
        const Vec2 prev = snapshot[loop.nodes[(k + m - 1) % m]];
        const Vec2 next = snapshot[loop.nodes[(k + 1) % m]];
        const Vec2 p = snapshot[node];
        const Vec2 m1 = (prev + p) * 0.5;
        const Vec2 m2 = (p + next) * 0.5;
        const double t = project_on_segment(p, m1, m2);
        continuum.coords[node] = m1 + (m2 - m1) * t;
      }
    }
    for (int cell : check_cells) {
      if (cell_min_det(continuum, cell, table) <= 0.0)
        throw FlippedElement(step, cell);
    }
  }
  return continuum;
}

double min_jacobian_ratio(const Continuum& continuum) {
  const FlipCheckTable table = flip_table(continuum.mesh->circumradius);
  double worst = std::numeric_limits<double>::max();
  for (int cell = 0; cell < continuum.mesh->cell_count(); ++cell) {
    if (!continuum.retained[cell]) continue;
    worst = std::min(worst, cell_min_det(continuum, cell, table));
  }
  // det(J_regular) = 1 by MVC linear precision, so the ratio is det itself.
  return worst;
}

bool jacobian_ok(const Continuum& continuum, double floor_ratio) {
  return min_jacobian_ratio(continuum) > floor_ratio;
}

bool hexagon_intersects_disk(const std::array<Vec2, 6>& hex, Vec2 center, double radius) {
  for (const Vec2& v : hex) {
    if (norm(v - center) < radius) return true;
  }
  for (int k = 0; k < 6; ++k) {
    const Vec2 a = hex[k];
    const Vec2 b = hex[(k + 1) % 6];
    const double t = project_on_segment(center, a, b);
    if (norm(center - (a + (b - a) * t)) < radius) return true;
  }
  return point_in_polygon(center, hex.data(), 6);
}

Continuum two_stage_removal(const HexMesh& mesh, const std::vector<Mask>& masks,
                            std::vector<RigidSurface> surfaces, Attachments ports,
                            int beta, bool stage_two) {
  CellMask retained = material_state(mesh, masks);
  Continuum stage1 = smooth_boundary(make_continuum(mesh, retained, surfaces, ports), beta);
  if (!stage_two) return stage1;

  // Stage 2: cells overlapped by a mask disk beyond centroid containment.
  CellMask retained2 = stage1.retained;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (!retained2[c]) continue;
    const auto hex = mesh.cell_polygon(c);
    for (const Mask& m : masks) {
      if (hexagon_intersects_disk(hex, {m.x, m.y}, m.r)) {
        retained2[c] = 0;
        break;
      }
    }
  }
  // Remaining cells restored to regular shape, boundary re-extracted,
  // smoothed again.
  return smooth_boundary(
      make_continuum(mesh, std::move(retained2), std::move(stage1.surfaces),
                     std::move(stage1.ports)),
      beta);
}

}  // namespace ccm
