// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/quadrature.hpp"

#include <cmath>

#include "ccmsynth/errors.hpp"

namespace ccm {

namespace {

TriangleRule make_rule(int n) {
  TriangleRule r;
  switch (n) {
    case 1:
      r.bary = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
      r.weights = {1.0};
      break;
    case 3:
      // Degree-2 interior rule.
      r.bary = {{2.0 / 3, 1.0 / 6, 1.0 / 6},
                {1.0 / 6, 2.0 / 3, 1.0 / 6},
                {1.0 / 6, 1.0 / 6, 2.0 / 3}};
      r.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
      break;
    case 7: {
      // Degree-5 symmetric rule.
      const double a1 = 0.059715871789770, b1 = 0.470142064105115;
      const double a2 = 0.797426985353087, b2 = 0.101286507323456;
      const double w0 = 0.225;
      const double w1 = 0.132394152788506;
      const double w2 = 0.125939180544827;
      r.bary = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
      r.weights = {w0, w1, w1, w1, w2, w2, w2};
      break;
    }
    case 25: {
      // 5x5 Gauss-Legendre on the unit square, collapsed onto the triangle
      // via xi = u, eta = v(1-u) with jacobian (1-u).
      const double gp[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                            0.5384693101056831, 0.9061798459386640};
      const double gw[5] = {0.2369268850561891, 0.4786286704993665,
                            0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};
      for (int i = 0; i < 5; ++i) {
        const double u = 0.5 * (gp[i] + 1.0);
        const double wu = 0.5 * gw[i];
        for (int j = 0; j < 5; ++j) {
          const double v = 0.5 * (gp[j] + 1.0);
          const double wv = 0.5 * gw[j];
          const double xi = u;
          const double eta = v * (1.0 - u);
          r.bary.push_back({1.0 - xi - eta, xi, eta});
          // (1-u) collapse jacobian; factor 2 renormalizes the reference
          // triangle area 1/2 so weights sum to 1.
          r.weights.push_back(2.0 * wu * wv * (1.0 - u));
        }
      }
      break;
    }
    default:
      throw InvalidArgument("triangle rule supports 1, 3, 7 or 25 points");
  }
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int n_points) {
  static const TriangleRule r1 = make_rule(1);
  static const TriangleRule r3 = make_rule(3);
  static const TriangleRule r7 = make_rule(7);
  static const TriangleRule r25 = make_rule(25);
  switch (n_points) {
    case 1: return r1;
    case 3: return r3;
    case 7: return r7;
    case 25: return r25;
    default: throw InvalidArgument("triangle rule supports 1, 3, 7 or 25 points");
  }
}

PolygonQuadrature polygon_fan_quadrature(const Vec2* poly, int n_vertices,
                                         const TriangleRule& rule) {
  Vec2 c;
  for (int i = 0; i < n_vertices; ++i) c += poly[i];
  c = c / n_vertices;

  PolygonQuadrature q;
  q.points.reserve(static_cast<std::size_t>(n_vertices) * rule.size());
  q.weights.reserve(q.points.capacity());
  for (int i = 0; i < n_vertices; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n_vertices];
    const double area = 0.5 * cross(a - c, b - c);  // signed
    for (int g = 0; g < rule.size(); ++g) {
      const auto& L = rule.bary[g];
      q.points.push_back(c * L[0] + a * L[1] + b * L[2]);
      q.weights.push_back(rule.weights[g] * area);
    }
  }
  return q;
}

}  // namespace ccm
