// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ccmsynth/design.hpp"
#include "ccmsynth/fem.hpp"
#include "ccmsynth/fsd.hpp"
#include "ccmsynth/smoothing.hpp"

namespace ccm {

/// mt19937_64 with a portable uniform draw (the engine is pinned by the
/// standard; distributions are not, so they are hand-rolled).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}
  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }
  std::string state() const;
  void set_state(const std::string& s);

 private:
  std::mt19937_64 eng_;
};

struct VariableBounds {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double r_min = 0.1, r_max = 8.0;
  double f_max = 0.9;
  double force_max = 500.0;
};

struct SearchConfig {
  double pr = 0.08;           // per-variable mutation probability
  double m_max = 6.0;         // max mutation size (mm or N)
  double f_mut_scale = 0.15;  // additive mutation scale for f in [0,1)
  int max_evals = 20000;
  std::uint64_t seed = 1;
  double penalty = 1e6;       // objective of infeasible/degenerate candidates
  int checkpoint_every = 50;
  VariableBounds bounds;
};

/// One whole-vector mutation pass: every variable tested independently
/// against pr; continuous variables perturbed by +-c*m_max then clamped,
/// s resampled to (c > 0.5), f perturbed in [0, f_max].
DesignVector mutate(const DesignVector& v, const SearchConfig& cfg, Rng& rng);

struct FeasibilityResult {
  bool feasible = false;
  std::string reason;          // no-input-port | no-output-port | no-fixed-dofs | disconnected
  Continuum continuum;         // pruned to the port component when feasible
};

/// Port/connectivity checks over the retained-cell adjacency graph; island
/// cells outside the input component are removed (dangling features) and
/// the continuum rebuilt (regular shapes, boundary, smoothing).
FeasibilityResult feasibility(const Continuum& continuum, int beta);

/// Everything a candidate evaluation needs.
struct Problem {
  const HexMesh* mesh = nullptr;
  Attachments ports;
  MaterialParams material;
  QuadratureSpec quadrature;
  SolverOptions solver;
  ObjectiveWeights weights;
  PathDescriptor specified;
  double specified_open_length = 0.0;
  int beta = 10;
  int n_harmonics = 50;
  double penalty = 1e6;
  bool stage_two_removal = true;
};

struct EvalResult {
  double objective = 0.0;
  bool feasible = false;
  bool solved = false;
  std::string reason;          // failure classification when penalized
  ObjectiveBreakdown breakdown;
  std::vector<Vec2> path;      // traced output path
  double volume_fraction = 0.0;
  bool had_active_contact = false;
  bool had_self_contact = false;
  bool had_mutual_contact = false;
  double solve_seconds = 0.0;
};

/// material_state -> two_stage_removal -> feasibility -> solve -> FSD
/// objective. Every failure maps to the penalty value.
EvalResult evaluate(const DesignVector& v, const Problem& problem);

/// Build the evaluated continuum for inspection/artifacts (throws on the
/// failures evaluate() would penalize).
Continuum build_candidate(const DesignVector& v, const Problem& problem);

struct TraceRow {
  int iteration = 0;
  bool feasible = false;
  double objective = 0.0;
  double best = 0.0;
  bool accepted = false;
};

struct SearchResult {
  DesignVector best;
  double best_objective = 0.0;
  std::vector<TraceRow> trace;
  EvalResult best_eval;
};

using IterationCallback =
    std::function<void(const TraceRow&, const EvalResult&, const DesignVector& best, Rng&)>;

/// Strict-improvement stochastic hill climber (budget counts evaluations,
/// including the initial design).
SearchResult hill_climb(const DesignVector& v0, const SearchConfig& cfg,
                        const Problem& problem, const IterationCallback& on_iteration = {});

}  // namespace ccm
