// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ccmsynth/design.hpp"
#include "ccmsynth/smoothing.hpp"

namespace ccm {

/// Topology plot: retained cells filled, boundary loops stroked, rigid
/// surfaces as filled disks, masks dashed, ports marked.
void write_topology_svg(const std::string& file, const Continuum& continuum,
                        const std::vector<Mask>& masks);

/// Deformed-configuration plot: boundary loops at the given node positions,
/// rigid disks, and the traced output path so far.
void write_deformed_svg(const std::string& file, const Continuum& continuum,
                        const std::vector<Vec2>& positions,
                        const std::vector<Vec2>& path);

}  // namespace ccm
