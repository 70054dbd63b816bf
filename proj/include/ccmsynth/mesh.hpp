// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ccmsynth/geometry.hpp"

namespace ccm {

using CellMask = std::vector<std::uint8_t>;  // 1 = retained / material

/// Regular flat-top honeycomb tessellation of a rectangular design domain.
/// Columns are staggered vertically by half a cell. Immutable after
/// generation; all candidate-specific state lives elsewhere.
struct HexMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 6>> cells;  // node ids, counter-clockwise
  int nx = 0, ny = 0;
  double circumradius = 0.0;
  /// Nominal spans (Lx, Ly) of the tessellated domain; the half-cell
  /// column stagger is excluded so Ly = ny*sqrt(3)*R exactly.
  Vec2 domain_size;

  /// Edge-neighbors per cell: neighbor across edge k (nodes k -> k+1), -1 if none.
  std::vector<std::array<int, 6>> neighbors;
  /// Cells incident to each node.
  std::vector<std::vector<int>> node_cells;

  int cell_count() const { return static_cast<int>(cells.size()); }
  int node_count() const { return static_cast<int>(nodes.size()); }
  double characteristic_length() const { return std::max(domain_size.x, domain_size.y); }

  Vec2 cell_centroid(int cell) const;
  std::array<Vec2, 6> cell_polygon(int cell) const;
};

HexMesh generate_honeycomb(int nx, int ny, double cell_circumradius);

/// One closed boundary loop. Node k connects to node k+1 (wrapping); edge k
/// is owned by exactly one retained cell, stored in edge_cell. Exterior
/// loops run counter-clockwise, holes clockwise (material on the left).
struct BoundaryLoop {
  std::vector<int> nodes;
  std::vector<int> edge_cell;
  bool exterior = false;
  double signed_area = 0.0;
  int size() const { return static_cast<int>(nodes.size()); }
};

struct BoundaryChain {
  std::vector<BoundaryLoop> loops;
  int edge_count() const;
};

/// Boundary of the retained-cell set: every edge used by exactly one
/// retained cell, chained into consistently oriented closed loops.
BoundaryChain extract_boundary(const HexMesh& mesh, const CellMask& retained);

/// Plain-text node/cell listing (`id x y` then `id n1..n6`), for debugging
/// and golden files.
void write_mesh_listing(std::ostream& os, const HexMesh& mesh);

}  // namespace ccm
