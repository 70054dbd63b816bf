// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/mvc.hpp"

#include <cmath>

#include "ccmsynth/errors.hpp"

namespace ccm {

namespace {

double polygon_diameter(std::span<const Vec2> poly) {
  double lo_x = poly[0].x, hi_x = lo_x, lo_y = poly[0].y, hi_y = lo_y;
  for (const Vec2& v : poly) {
    lo_x = std::min(lo_x, v.x); hi_x = std::max(hi_x, v.x);
    lo_y = std::min(lo_y, v.y); hi_y = std::max(hi_y, v.y);
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

void validate(std::span<const Vec2> poly, double diam) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) throw DegeneratePolygon("polygon needs >= 3 vertices");
  if (!(diam > 0.0)) throw DegeneratePolygon("zero-extent polygon");
  double area = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    if (norm(b - a) < 1e-14 * diam) throw DegeneratePolygon("repeated vertices");
    area += cross(a, b);
  }
  if (std::abs(area) < 1e-14 * diam * diam)
    throw DegeneratePolygon("collinear-collapsed polygon");
}

// Core evaluation; `want_grad` selects whether gradients are filled.
// Vertex and on-edge points take the limit values; their gradients are
// evaluated at a point nudged toward the polygon centroid.
void mvc_eval(std::span<const Vec2> poly, Vec2 p, std::vector<double>& N,
              std::vector<Vec2>* dN, int depth) {
  const int n = static_cast<int>(poly.size());
  const double diam = polygon_diameter(poly);
  validate(poly, diam);

  N.assign(n, 0.0);
  if (dN) dN->assign(n, Vec2{});

  auto nudge_gradients = [&](void) {
    if (!dN || depth > 0) return;
    Vec2 c;
    for (const Vec2& v : poly) c += v;
    c = c / n;
    const Vec2 dir = normalized(c - p);
    std::vector<double> tmp;
    mvc_eval(poly, p + dir * (1e-7 * diam), tmp, dN, depth + 1);
  };

  std::vector<Vec2> d(n);
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    d[i] = poly[i] - p;
    r[i] = norm(d[i]);
    if (r[i] < 1e-12 * diam) {  // on vertex i
      N[i] = 1.0;
      nudge_gradients();
      return;
    }
  }
  // On-edge check (between the endpoints): linear interpolation limit.
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double A = cross(d[i], d[j]);
    const double D = dot(d[i], d[j]);
    if (std::abs(A) < 1e-12 * diam * diam && D < 0.0) {
      N[i] = r[j] / (r[i] + r[j]);
      N[j] = r[i] / (r[i] + r[j]);
      nudge_gradients();
      return;
    }
  }

  std::vector<double> t(n);
  std::vector<Vec2> dt(n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double A = cross(d[i], d[j]);
    const double D = dot(d[i], d[j]);
    t[i] = (r[i] * r[j] - D) / A;
    if (dN) {
      const Vec2 ui = d[i] / r[i];
      const Vec2 uj = d[j] / r[j];
      const Vec2 dA = rot90(poly[j] - poly[i]);
      dt[i] = (d[i] + d[j] - (ui * r[j] + uj * r[i]) - dA * t[i]) / A;
    }
  }

  std::vector<double> w(n);
  std::vector<Vec2> dw(n);
  double W = 0.0;
  Vec2 dW;
  for (int i = 0; i < n; ++i) {
    const int im = (i + n - 1) % n;
    w[i] = (t[im] + t[i]) / r[i];
    W += w[i];
    if (dN) {
      dw[i] = (dt[im] + dt[i]) / r[i] + (d[i] / r[i]) * (w[i] / r[i]);
      dW += dw[i];
    }
  }
  if (W == 0.0 || !std::isfinite(W)) throw DegeneratePolygon("mean value weights degenerate");
  for (int i = 0; i < n; ++i) {
    N[i] = w[i] / W;
    if (dN) (*dN)[i] = (dw[i] - dW * N[i]) / W;
  }
}

}  // namespace

void mvc_shape(std::span<const Vec2> polygon, Vec2 point,
               std::vector<double>& values, std::vector<Vec2>& gradients) {
  mvc_eval(polygon, point, values, &gradients, 0);
}

void mvc_values(std::span<const Vec2> polygon, Vec2 point, std::vector<double>& values) {
  mvc_eval(polygon, point, values, nullptr, 0);
}

}  // namespace ccm
