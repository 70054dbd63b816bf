// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ccmsynth/geometry.hpp"

namespace ccm {

/// Open polyline of precision points (mm).
struct PathPolyline {
  std::vector<Vec2> points;
};

/// Simple clockwise closed polygon produced by close_path, carrying the
/// metadata of the original open path used by the descriptor (length of
/// the open part, orientation of its first segment).
struct ClosedPath {
  std::vector<Vec2> points;   // closed: last connects back to first
  double open_length = 0.0;
  double open_theta = 0.0;    // angle of the first open segment, (-pi, pi]
};

/// Close an open path in the clockwise sense without self-intersection:
/// straight chord from end to start, detouring via expanded-bounding-box
/// corners when the chord would cross the path. Throws
/// SelfIntersectingInput / DegeneratePath.
ClosedPath close_path(const PathPolyline& path);

/// Treat an already-closed polygon as a ClosedPath (full perimeter as
/// length, first segment as orientation). Reverses to clockwise if needed.
ClosedPath as_closed(const PathPolyline& polygon);

/// Zahn-Roskies tangent-angle descriptor: A_m, B_m are the Fourier
/// coefficients of the angular deviation from uniform turning, computed in
/// closed form from the per-vertex turning angles.
struct PathDescriptor {
  std::vector<double> A, B;   // m = 1..N
  double L = 0.0;             // open-path length (mm)
  double theta = 0.0;         // initial orientation (rad)
};
PathDescriptor descriptor(const ClosedPath& path, int n_harmonics);

struct ObjectiveWeights {
  double w_a = 100.0;      // rad^-2
  double w_b = 100.0;      // rad^-2
  double w_L = 1.0;        // mm^-2
  double w_theta = 0.1;    // rad^-2
  double lambda_v = 20.0;  // applied when V >= V*
  double v_star = 0.3;     // permitted volume fraction
};

struct ObjectiveBreakdown {
  double A_err = 0.0, B_err = 0.0, L_err = 0.0, theta_err = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

ObjectiveBreakdown objective_breakdown(const PathDescriptor& actual,
                                       const PathDescriptor& specified,
                                       const ObjectiveWeights& weights,
                                       double volume_fraction);
double objective(const PathDescriptor& actual, const PathDescriptor& specified,
                 const ObjectiveWeights& weights, double volume_fraction);

/// zeta_l = |L_s - L_a| / L_s * 100%.
double length_deviation(double L_specified, double L_actual);

/// CSV path I/O: one `x,y` pair per line.
PathPolyline load_path_csv(const std::string& file);
void save_path_csv(const std::string& file, const std::vector<Vec2>& points);

/// Debug dump: `m,A_m,B_m` rows plus trailing `L` and `theta` lines.
void save_descriptor_csv(const std::string& file, const PathDescriptor& d);

}  // namespace ccm
