// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace ccm {

/// Plain 2-D vector/point in mm. Value type used throughout the geometry layer.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }

/// Rotate by +90 degrees (counter-clockwise).
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }
/// Rotate by -90 degrees (clockwise).
inline Vec2 rot270(Vec2 a) { return {a.y, -a.x}; }

/// Closest point on segment [a,b] to p, returned as the clamped parameter
/// t in [0,1] with the point a + t*(b-a).
inline double project_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return 0.0;
  double t = dot(p - a, ab) / len2;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return t;
}

/// Proper or touching intersection of segments [a,b] and [c,d].
/// Shared endpoints count as intersections; callers exclude adjacency.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Point strictly inside a simple polygon (ray crossing; boundary points
/// are implementation-defined, do not rely on them).
bool point_in_polygon(Vec2 p, const Vec2* poly, int n);

/// Signed polygon area (positive = counter-clockwise).
double polygon_area(const Vec2* poly, int n);

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  a = std::fmod(a, two_pi);
  if (a <= -M_PI) a += two_pi;
  if (a > M_PI) a -= two_pi;
  return a;
}

}  // namespace ccm
