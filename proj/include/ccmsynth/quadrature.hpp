// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "ccmsynth/geometry.hpp"

namespace ccm {

/// Quadrature rule on a triangle, stored in barycentric coordinates with
/// weights normalized to sum to 1 (scale by the physical triangle area).
struct TriangleRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Rules with 1, 3 and 7 points are standard symmetric rules; 25 points is
/// a 5x5 Gauss-Legendre tensor rule collapsed onto the triangle.
const TriangleRule& triangle_rule(int n_points);

/// Physical quadrature for a polygon split into centroid-fan triangles.
/// Weights are signed (triangle areas keep their sign) so the fan sum is
/// exact for concave simple polygons too.
struct PolygonQuadrature {
  std::vector<Vec2> points;
  std::vector<double> weights;
};
PolygonQuadrature polygon_fan_quadrature(const Vec2* poly, int n_vertices,
                                         const TriangleRule& rule);

}  // namespace ccm
