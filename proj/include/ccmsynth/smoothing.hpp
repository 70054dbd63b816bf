// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ccmsynth/design.hpp"
#include "ccmsynth/mesh.hpp"

namespace ccm {

/// Load/measurement attachment points, as parent-mesh node ids.
struct Attachments {
  int input_node = -1;
  int output_node = -1;
  Vec2 input_direction{1.0, 0.0};
  std::vector<int> fixed_nodes;
};

/// A candidate mechanism: retained cells of the parent mesh with smoothed
/// boundary coordinates, plus rigid contact surfaces and attachments.
/// The parent mesh is never mutated; removal is temporary per candidate.
struct Continuum {
  const HexMesh* mesh = nullptr;
  CellMask retained;
  std::vector<Vec2> coords;  // working node coordinates (interior == parent)
  BoundaryChain boundary;
  std::vector<RigidSurface> surfaces;
  Attachments ports;

  int retained_count() const;
  double volume_fraction() const;
  /// Mean length of the (smoothed) boundary edges.
  double mean_boundary_edge() const;
  std::vector<Vec2> cell_polygon(int cell) const;
};

/// Assemble a continuum from a retained set: parent coordinates, boundary
/// extracted, no smoothing applied yet. Throws EmptyContinuum.
Continuum make_continuum(const HexMesh& mesh, CellMask retained,
                         std::vector<RigidSurface> surfaces, Attachments ports);

/// One smoothing step projects each boundary node onto the chord joining
/// the midpoints of its two incident boundary edges (shortest
/// perpendicular, clamped to the chord). Interior nodes and connectivity
/// are untouched. Throws FlippedElement when a cell jacobian goes
/// non-positive after a step.
Continuum smooth_boundary(Continuum continuum, int beta);

/// min over retained cells and quadrature points of det(J)/det(J_regular),
/// where J maps the cell's original regular shape to its current one.
double min_jacobian_ratio(const Continuum& continuum);
bool jacobian_ok(const Continuum& continuum, double floor_ratio);

/// Stage 1 removes centroid-inside-mask cells and smooths; stage 2 also
/// removes retained cells whose regular hexagon intersects any mask disk,
/// restores remaining cells to regular shape and smooths again. The
/// second stage can be disabled (stage_two = false).
Continuum two_stage_removal(const HexMesh& mesh, const std::vector<Mask>& masks,
                            std::vector<RigidSurface> surfaces, Attachments ports,
                            int beta, bool stage_two = true);

/// Regular hexagon vs disk overlap test (vertices, edges or containment).
bool hexagon_intersects_disk(const std::array<Vec2, 6>& hex, Vec2 center, double radius);

}  // namespace ccm
