// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <unordered_map>

#include "ccmsynth/errors.hpp"

namespace ccm {

namespace {

constexpr double kMergeTol = 1e-9;  // mm; node identity tolerance

// Spatial hash for exact-in-practice node deduplication.
class NodeDedup {
 public:
  explicit NodeDedup(double cell) : cell_(cell) {}

  int find_or_add(Vec2 p, std::vector<Vec2>& nodes) {
    const std::int64_t kx = static_cast<std::int64_t>(std::floor(p.x / cell_));
    const std::int64_t ky = static_cast<std::int64_t>(std::floor(p.y / cell_));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key(kx + dx, ky + dy));
        if (it == buckets_.end()) continue;
        for (int id : it->second) {
          if (norm(nodes[id] - p) < kMergeTol) return id;
        }
      }
    }
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(p);
    buckets_[key(kx, ky)].push_back(id);
    return id;
  }

 private:
  static std::uint64_t key(std::int64_t kx, std::int64_t ky) {
    return static_cast<std::uint64_t>(kx) * 0x9e3779b97f4a7c15ull ^
           static_cast<std::uint64_t>(ky);
  }
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

}  // namespace

Vec2 HexMesh::cell_centroid(int cell) const {
  if (cell < 0 || cell >= cell_count()) throw InvalidArgument("cell index out of range");
  Vec2 c;
  for (int n : cells[cell]) c += nodes[n];
  return c / 6.0;
}

std::array<Vec2, 6> HexMesh::cell_polygon(int cell) const {
  if (cell < 0 || cell >= cell_count()) throw InvalidArgument("cell index out of range");
  std::array<Vec2, 6> poly;
  for (int k = 0; k < 6; ++k) poly[k] = nodes[cells[cell][k]];
  return poly;
}

HexMesh generate_honeycomb(int nx, int ny, double cell_circumradius) {
  if (nx < 1 || ny < 1) throw InvalidArgument("cell counts must be >= 1");
  if (!(cell_circumradius > 0.0)) throw InvalidArgument("circumradius must be positive");

  const double R = cell_circumradius;
  const double h = std::sqrt(3.0) / 2.0 * R;  // half height of a flat-top hexagon
  // Flat-top corner offsets, counter-clockwise from the +x vertex.
  const Vec2 corner[6] = {{R, 0.0},  {0.5 * R, h},  {-0.5 * R, h},
                          {-R, 0.0}, {-0.5 * R, -h}, {0.5 * R, -h}};

  HexMesh mesh;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.circumradius = R;
  mesh.domain_size = {1.5 * R * nx + 0.5 * R, std::sqrt(3.0) * R * ny};
  mesh.cells.reserve(static_cast<std::size_t>(nx) * ny);

  NodeDedup dedup(4.0 * kMergeTol);
  for (int i = 0; i < nx; ++i) {
    const double cx = R + 1.5 * R * i;
    const double stagger = (i % 2 == 1) ? h : 0.0;
    for (int j = 0; j < ny; ++j) {
      const Vec2 center{cx, h + std::sqrt(3.0) * R * j + stagger};
      std::array<int, 6> cell;
      for (int k = 0; k < 6; ++k) {
        cell[k] = dedup.find_or_add(center + corner[k], mesh.nodes);
      }
      mesh.cells.push_back(cell);
    }
  }

  // Node -> incident cells, then edge-neighbors via shared undirected edges.
  mesh.node_cells.assign(mesh.nodes.size(), {});
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (int n : mesh.cells[c]) mesh.node_cells[n].push_back(c);
  }
  std::map<std::pair<int, int>, std::pair<int, int>> edge_owner;  // edge -> (cell, local edge)
  mesh.neighbors.assign(mesh.cells.size(), {-1, -1, -1, -1, -1, -1});
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (int k = 0; k < 6; ++k) {
      const int a = mesh.cells[c][k];
      const int b = mesh.cells[c][(k + 1) % 6];
      const auto key = std::minmax(a, b);
      auto it = edge_owner.find(key);
      if (it == edge_owner.end()) {
        edge_owner.emplace(key, std::make_pair(c, k));
      } else {
        mesh.neighbors[c][k] = it->second.first;
        mesh.neighbors[it->second.first][it->second.second] = c;
      }
    }
  }
  return mesh;
}

int BoundaryChain::edge_count() const {
  int n = 0;
  for (const auto& loop : loops) n += loop.size();
  return n;
}

BoundaryChain extract_boundary(const HexMesh& mesh, const CellMask& retained) {
  if (retained.size() != mesh.cells.size())
    throw InvalidArgument("retained mask size mismatch");

  // Directed boundary edges in the owning cell's CCW orientation.
  struct DirEdge { int to; int cell; };
  std::unordered_map<int, DirEdge> out_edge;  // start node -> edge
  int n_boundary = 0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (!retained[c]) continue;
    for (int k = 0; k < 6; ++k) {
      const int nb = mesh.neighbors[c][k];
      if (nb >= 0 && retained[nb]) continue;
      const int a = mesh.cells[c][k];
      const int b = mesh.cells[c][(k + 1) % 6];
      // Honeycomb edge-connectivity guarantees one outgoing boundary edge
      // per boundary node; assert by construction.
      if (!out_edge.emplace(a, DirEdge{b, c}).second)
        throw Error("boundary pinch point at node " + std::to_string(a));
      ++n_boundary;
    }
  }

  BoundaryChain chain;
  std::unordered_map<int, bool> visited;
  for (const auto& [start, first] : out_edge) {
    if (visited[start]) continue;
    BoundaryLoop loop;
    int cur = start;
    do {
      visited[cur] = true;
      auto it = out_edge.find(cur);
      if (it == out_edge.end()) throw Error("open boundary chain");
      loop.nodes.push_back(cur);
      loop.edge_cell.push_back(it->second.cell);
      cur = it->second.to;
    } while (cur != start);
    double area = 0.0;
    const int n = loop.size();
    for (int k = 0; k < n; ++k) {
      const Vec2 a = mesh.nodes[loop.nodes[k]];
      const Vec2 b = mesh.nodes[loop.nodes[(k + 1) % n]];
      area += cross(a, b);
    }
    loop.signed_area = 0.5 * area;
    loop.exterior = loop.signed_area > 0.0;
    chain.loops.push_back(std::move(loop));
  }
  if (chain.edge_count() != n_boundary) throw Error("boundary chaining lost edges");

  // Deterministic ordering regardless of hash iteration: exterior loops
  // first, then by smallest node id.
  std::sort(chain.loops.begin(), chain.loops.end(), [](const BoundaryLoop& a, const BoundaryLoop& b) {
    if (a.exterior != b.exterior) return a.exterior;
    return *std::min_element(a.nodes.begin(), a.nodes.end()) <
           *std::min_element(b.nodes.begin(), b.nodes.end());
  });
  // Rotate each loop to start at its smallest node id.
  for (auto& loop : chain.loops) {
    const auto mn = std::min_element(loop.nodes.begin(), loop.nodes.end());
    const auto shift = std::distance(loop.nodes.begin(), mn);
    std::rotate(loop.nodes.begin(), loop.nodes.begin() + shift, loop.nodes.end());
    std::rotate(loop.edge_cell.begin(), loop.edge_cell.begin() + shift, loop.edge_cell.end());
  }
  return chain;
}

void write_mesh_listing(std::ostream& os, const HexMesh& mesh) {
  char buf[128];
  for (int i = 0; i < mesh.node_count(); ++i) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", i, mesh.nodes[i].x, mesh.nodes[i].y);
    os << buf;
  }
  for (int c = 0; c < mesh.cell_count(); ++c) {
    os << c;
    for (int n : mesh.cells[c]) os << ' ' << n;
    os << '\n';
  }
}

}  // namespace ccm
