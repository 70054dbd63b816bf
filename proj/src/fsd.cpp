// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/fsd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ccmsynth/errors.hpp"

namespace ccm {

namespace {

double bbox_diag(const std::vector<Vec2>& pts) {
  double lo_x = pts[0].x, hi_x = lo_x, lo_y = pts[0].y, hi_y = lo_y;
  for (const Vec2& p : pts) {
    lo_x = std::min(lo_x, p.x); hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y); hi_y = std::max(hi_y, p.y);
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

std::vector<Vec2> dedup_consecutive(const std::vector<Vec2>& pts, double tol) {
  std::vector<Vec2> out;
  for (const Vec2& p : pts) {
    if (out.empty() || norm(p - out.back()) > tol) out.push_back(p);
  }
  return out;
}

bool path_self_intersects(const std::vector<Vec2>& p) {
  const int n = static_cast<int>(p.size()) - 1;  // segments
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (segments_intersect(p[i], p[i + 1], p[j], p[j + 1])) return true;
    }
  }
  return false;
}

// Trim a segment's endpoints inward so shared path endpoints do not count
// as intersections.
bool closure_hits_path(const std::vector<Vec2>& closure, const std::vector<Vec2>& path) {
  const int m = static_cast<int>(closure.size()) - 1;
  const int n = static_cast<int>(path.size()) - 1;
  for (int s = 0; s < m; ++s) {
    Vec2 a = closure[s];
    Vec2 b = closure[s + 1];
    const Vec2 d = b - a;
    if (s == 0) a += d * 1e-7;
    if (s == m - 1) b -= d * 1e-7;
    for (int k = 0; k < n; ++k) {
      if (segments_intersect(a, b, path[k], path[k + 1])) return true;
    }
  }
  return false;
}

bool all_collinear(const std::vector<Vec2>& p, double tol) {
  const Vec2 d = p.back() - p.front();
  const double len = norm(d);
  if (len == 0.0) return true;
  for (const Vec2& q : p) {
    if (std::abs(cross(d, q - p.front())) / len > tol) return false;
  }
  return true;
}

void enforce_clockwise(std::vector<Vec2>& pts) {
  const double area = polygon_area(pts.data(), static_cast<int>(pts.size()));
  if (area > 0.0) std::reverse(pts.begin() + 1, pts.end());
}

}  // namespace

ClosedPath close_path(const PathPolyline& path) {
  if (path.points.size() < 2) throw DegeneratePath("path needs at least 2 points");
  const double diag = bbox_diag(path.points);
  if (!(diag > 0.0)) throw DegeneratePath("zero-length path");
  std::vector<Vec2> p = dedup_consecutive(path.points, 1e-12 * diag);
  if (p.size() < 2) throw DegeneratePath("zero-length path");
  if (path_self_intersects(p)) throw SelfIntersectingInput("open path self-intersects");

  ClosedPath closed;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) closed.open_length += norm(p[k + 1] - p[k]);
  closed.open_theta = std::atan2(p[1].y - p[0].y, p[1].x - p[0].x);

  // Already closed input or straight path: the point list itself is the
  // (possibly degenerate) polygon.
  if (norm(p.back() - p.front()) < 1e-12 * diag) {
    p.pop_back();
    if (p.size() < 2) throw DegeneratePath("degenerate closed path");
    closed.points = std::move(p);
    enforce_clockwise(closed.points);
    return closed;
  }
  if (p.size() == 2 || all_collinear(p, 1e-12 * diag)) {
    closed.points = std::move(p);  // degenerate lens, closing edge implied
    return closed;
  }

  // Candidate closures: straight chord, then expanded-bounding-box corner
  // detours. First candidate that does not cross the path wins; clockwise
  // orientation is enforced afterwards.
  double lo_x = p[0].x, hi_x = lo_x, lo_y = p[0].y, hi_y = lo_y;
  for (const Vec2& q : p) {
    lo_x = std::min(lo_x, q.x); hi_x = std::max(hi_x, q.x);
    lo_y = std::min(lo_y, q.y); hi_y = std::max(hi_y, q.y);
  }
  const double margin = 0.05 * diag;
  const Vec2 corner[4] = {{lo_x - margin, lo_y - margin},
                          {hi_x + margin, lo_y - margin},
                          {hi_x + margin, hi_y + margin},
                          {lo_x - margin, hi_y + margin}};

  std::vector<std::vector<Vec2>> candidates;
  candidates.push_back({p.back(), p.front()});  // chord
  for (int count = 1; count <= 4; ++count) {
    for (int dir = 0; dir < 2; ++dir) {
      for (int start = 0; start < 4; ++start) {
        std::vector<Vec2> route{p.back()};
        for (int k = 0; k < count; ++k) {
          const int idx = dir == 0 ? (start + k) % 4 : (start + 4 - k) % 4;
          route.push_back(corner[idx]);
        }
        route.push_back(p.front());
        candidates.push_back(std::move(route));
      }
    }
  }

  for (const auto& closure : candidates) {
    if (closure_hits_path(closure, p)) continue;
    closed.points = p;
    for (std::size_t k = 1; k + 1 < closure.size(); ++k) closed.points.push_back(closure[k]);
    enforce_clockwise(closed.points);
    return closed;
  }
  throw Error("could not construct a non-intersecting closure");
}

ClosedPath as_closed(const PathPolyline& polygon) {
  if (polygon.points.size() < 3) throw DegeneratePath("polygon needs at least 3 points");
  const double diag = bbox_diag(polygon.points);
  std::vector<Vec2> p = dedup_consecutive(polygon.points, 1e-12 * diag);
  if (norm(p.back() - p.front()) < 1e-12 * diag) p.pop_back();
  if (p.size() < 3) throw DegeneratePath("degenerate polygon");
  ClosedPath closed;
  for (std::size_t k = 0; k < p.size(); ++k)
    closed.open_length += norm(p[(k + 1) % p.size()] - p[k]);
  closed.open_theta = std::atan2(p[1].y - p[0].y, p[1].x - p[0].x);
  closed.points = std::move(p);
  enforce_clockwise(closed.points);
  return closed;
}

PathDescriptor descriptor(const ClosedPath& path, int n_harmonics) {
  const auto& p = path.points;
  const int n = static_cast<int>(p.size());
  if (n < 2) throw DegeneratePath("closed path needs at least 2 points");

  std::vector<double> edge_len(n), edge_angle(n);
  double L_total = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec2 e = p[(k + 1) % n] - p[k];
    edge_len[k] = norm(e);
    edge_angle[k] = std::atan2(e.y, e.x);
    L_total += edge_len[k];
  }
  if (!(L_total > 0.0)) throw DegeneratePath("zero-perimeter path");

  // Turning angle and normalized arc position per vertex. Vertex k joins
  // edge k-1 to edge k; exact reversals take -pi (clockwise convention).
  std::vector<double> turning(n), tpos(n);
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    double d = wrap_angle(edge_angle[k] - edge_angle[(k + n - 1) % n]);
    if (std::abs(d - M_PI) < 1e-12) d = -M_PI;
    turning[k] = d;
    tpos[k] = 2.0 * M_PI * s / L_total;  // vertex k sits at arc length of edge k's start
    s += edge_len[k];
  }

  PathDescriptor out;
  out.A.assign(n_harmonics, 0.0);
  out.B.assign(n_harmonics, 0.0);
  for (int m = 1; m <= n_harmonics; ++m) {
    double a = 0.0, b = 0.0;
    for (int k = 0; k < n; ++k) {
      a += turning[k] * std::sin(m * tpos[k]);
      b += turning[k] * std::cos(m * tpos[k]);
    }
    out.A[m - 1] = -a / (m * M_PI);
    out.B[m - 1] = b / (m * M_PI);
  }
  out.L = path.open_length;
  out.theta = path.open_theta;
  return out;
}

ObjectiveBreakdown objective_breakdown(const PathDescriptor& actual,
                                       const PathDescriptor& specified,
                                       const ObjectiveWeights& weights,
                                       double volume_fraction) {
  if (actual.A.size() != specified.A.size())
    throw InvalidArgument("descriptor harmonic counts differ");
  ObjectiveBreakdown r;
  for (std::size_t m = 0; m < actual.A.size(); ++m) {
    r.A_err += (specified.A[m] - actual.A[m]) * (specified.A[m] - actual.A[m]);
    r.B_err += (specified.B[m] - actual.B[m]) * (specified.B[m] - actual.B[m]);
  }
  r.L_err = (specified.L - actual.L) * (specified.L - actual.L);
  const double dtheta = wrap_angle(specified.theta - actual.theta);
  r.theta_err = dtheta * dtheta;
  if (volume_fraction >= weights.v_star)
    r.penalty = weights.lambda_v * (volume_fraction - weights.v_star);
  r.total = weights.w_a * r.A_err + weights.w_b * r.B_err + weights.w_L * r.L_err +
            weights.w_theta * r.theta_err + r.penalty;
  return r;
}

double objective(const PathDescriptor& actual, const PathDescriptor& specified,
                 const ObjectiveWeights& weights, double volume_fraction) {
  return objective_breakdown(actual, specified, weights, volume_fraction).total;
}

double length_deviation(double L_specified, double L_actual) {
  if (!(L_specified > 0.0)) throw InvalidArgument("specified length must be positive");
  return std::abs(L_specified - L_actual) / L_specified * 100.0;
}

PathPolyline load_path_csv(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw IoError("cannot read path file " + file);
  PathPolyline path;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    Vec2 p;
    ls >> p.x >> p.y;
    if (ls.fail()) throw IoError("malformed path line: " + line);
    path.points.push_back(p);
  }
  return path;
}

void save_path_csv(const std::string& file, const std::vector<Vec2>& points) {
  std::ofstream os(file);
  if (!os) throw IoError("cannot write " + file);
  char buf[128];
  for (const Vec2& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    os << buf;
  }
}

void save_descriptor_csv(const std::string& file, const PathDescriptor& d) {
  std::ofstream os(file);
  if (!os) throw IoError("cannot write " + file);
  char buf[128];
  os << "m,A,B\n";
  for (std::size_t m = 0; m < d.A.size(); ++m) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", m + 1, d.A[m], d.B[m]);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "L,%.17g\ntheta,%.17g\n", d.L, d.theta);
  os << buf;
}

}  // namespace ccm
