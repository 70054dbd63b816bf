// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccmsynth/optimizer.hpp"

namespace ccm {

/// Line-oriented key-value problem specification. All scalars have
/// defaults; the emitted effective config reparses to an identical spec.
struct ProblemSpec {
  int nx = 25, ny = 25;
  double cell_circumradius = 1.0;
  int mask_nx = 8, mask_ny = 8;
  double mask_r_min = 0.1, mask_r_max = 8.0;
  double youngs_modulus = 2100.0;
  double poisson_ratio = 0.33;
  double thickness = 1.0;
  std::string kinematics = "plane_strain";
  double volume_fraction = 0.30;
  Vec2 input_point{0.0, 0.0};
  Vec2 input_dir{1.0, 0.0};
  Vec2 output_point{0.0, 0.0};
  std::vector<std::array<double, 4>> fix_boxes;
  std::string path_file;
  int stage2_removal = 1;
  int beta = 10;
  int gauss_points = 25;
  int load_steps = 20;
  int max_newton = 30;
  double newton_tol = 1e-8;
  int max_halvings = 4;
  int max_augmentations = 10;
  double eps_n_factor = 50.0;
  double eps_s_factor = 4.0;
  double g_tol_factor = 1e-3;
  double capture_factor = 0.6;
  int contact_fd_stiffness = 0;
  int n_harmonics = 50;
  double w_a = 100.0, w_b = 100.0, w_L = 1.0, w_theta = 0.1;
  double lambda_v = 20.0;
  std::uint64_t seed = 1;
  int max_evals = 20000;
  double mutation_probability = 0.08;
  double m_max = 6.0;
  double f_mutation_scale = 0.15;
  double f_max = 0.9;
  double force_max = 500.0;
  double force_initial = 100.0;
  double penalty = 1e6;
  int checkpoint_every = 50;
  double initial_radius = 0.0;   // 0 = half the mask-grid pitch
  int initial_s = 0;
  double initial_f = 0.45;
  std::string initial_design;    // optional design-vector file

  bool operator==(const ProblemSpec&) const = default;
};

ProblemSpec parse_spec(const std::string& file);
ProblemSpec parse_spec_stream(std::istream& is, const std::string& dir_hint);
void emit_spec(std::ostream& os, const ProblemSpec& spec);

/// Overridable knobs on the command line.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> max_evals;
  int mesh_scale = 1;
  std::optional<int> gauss_points;
  std::optional<int> beta;
  bool dry_run = false;
  bool dump_displacements = false;
  std::string out_dir = "out";
};

/// Spec + mesh + resolved ports + evaluation problem, built together so the
/// mesh outlives the problem's pointer to it.
struct BuiltProblem {
  ProblemSpec spec;
  std::shared_ptr<const HexMesh> mesh;
  Problem problem;
  SearchConfig search;
  PathPolyline specified_path;
  DesignVector initial_design;
};

BuiltProblem build_problem(const ProblemSpec& spec, const RunOverrides& ov);

/// Full diagnostics for a single design (the artifact-emitting analogue of
/// evaluate(); identical arithmetic path).
struct Analysis {
  EvalResult eval;
  Continuum continuum;       // valid when eval.feasible
  SolveState solve_state;    // valid when eval.feasible
};
Analysis analyze_design(const DesignVector& v, const Problem& problem,
                        bool record_deformed);

/// `synth` entry: runs the hill climber and writes the artifact set
/// (best_design.txt, convergence.csv, path_actual.csv, topology.svg,
/// deformation SVGs, contact_report.csv). Returns the process exit code.
int run_synthesis(const std::string& spec_file, const RunOverrides& ov);

/// `analyze` entry: single-candidate evaluation with full diagnostics and
/// a summary.csv (path length, zeta_l, objective breakdown).
int analyze_candidate(const std::string& spec_file, const std::string& design_file,
                      const RunOverrides& ov);

}  // namespace ccm
