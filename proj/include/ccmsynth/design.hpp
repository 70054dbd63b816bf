// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ccmsynth/mesh.hpp"

namespace ccm {

/// Negative circular mask. (x, y) center and radius r in mm; s flags a
/// rigid contact surface of radius f*r suspended inside the mask.
struct Mask {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  int s = 0;
  double f = 0.0;
};

/// The genome of the search: M masks plus the signed input-force magnitude.
struct DesignVector {
  std::vector<Mask> masks;
  double force_magnitude = 0.0;
};

/// Motionless circular contact surface.
struct RigidSurface {
  Vec2 center;
  double radius = 0.0;
};

/// Binary material state: 1 unless the cell centroid lies strictly inside
/// any mask disk. A centroid exactly on a mask circle counts as outside.
CellMask material_state(const HexMesh& mesh, const std::vector<Mask>& masks);

/// One rigid surface per mask with s = 1 and positive radius f*r.
std::vector<RigidSurface> rigid_surfaces(const std::vector<Mask>& masks);

/// Serialization: one line per mask `x y r s f`, final line `F <value>`.
/// Bit-exact round-trip.
void write_design(std::ostream& os, const DesignVector& v);
DesignVector read_design(std::istream& is);
void save_design(const std::string& path, const DesignVector& v);
DesignVector load_design(const std::string& path);

}  // namespace ccm
