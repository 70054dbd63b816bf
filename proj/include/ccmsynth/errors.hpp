// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ccm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error { using Error::Error; };
struct DegeneratePolygon : Error { using Error::Error; };

struct FlippedElement : Error {
  int step;
  int cell;
  FlippedElement(int step_, int cell_)
      : Error("element flipped at smoothing step " + std::to_string(step_) +
              " (cell " + std::to_string(cell_) + ")"),
        step(step_), cell(cell_) {}
};

struct EmptyContinuum : Error {
  EmptyContinuum() : Error("no cells retained") {}
};

struct NonPositiveJacobian : Error {
  int cell;
  explicit NonPositiveJacobian(int cell_)
      : Error("non-positive deformation jacobian in cell " + std::to_string(cell_)),
        cell(cell_) {}
};

struct NonConvergence : Error { using Error::Error; };
struct AugmentationStall : Error { using Error::Error; };
struct SelfIntersectingInput : Error { using Error::Error; };
struct DegeneratePath : Error { using Error::Error; };

struct SpecParseError : Error {
  int line;
  SpecParseError(int line_, const std::string& what_)
      : Error("spec line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct IoError : Error { using Error::Error; };

}  // namespace ccm
