// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "ccmsynth/geometry.hpp"

namespace ccm {

/// Mean value coordinates on an arbitrary simple polygon (concave allowed).
/// Returns shape-function values and spatial gradients at `point`.
///
/// Properties: partition of unity, linear precision, Kronecker at vertices;
/// values are nonnegative for convex polygons. Points on an edge use the
/// linear-interpolation limit.
void mvc_shape(std::span<const Vec2> polygon, Vec2 point,
               std::vector<double>& values, std::vector<Vec2>& gradients);

/// Values only (cheaper; identical conventions).
void mvc_values(std::span<const Vec2> polygon, Vec2 point, std::vector<double>& values);

}  // namespace ccm
