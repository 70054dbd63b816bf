// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "ccmsynth/contact.hpp"
#include "ccmsynth/material.hpp"
#include "ccmsynth/quadrature.hpp"
#include "ccmsynth/smoothing.hpp"

namespace ccm {

struct QuadratureSpec {
  int gauss_per_triangle = 25;  // 1, 3, 7 or 25
};

/// Point load at a single node, ramped over the load steps.
struct LoadSpec {
  int node = -1;
  Vec2 direction{1.0, 0.0};    // unit; sign lives in magnitude
  double magnitude = 0.0;      // N, signed
};

struct SolverOptions {
  int n_steps = 20;
  int max_newton = 30;
  int max_halvings = 4;
  int max_augmentations = 10;
  double tol_r = 1e-8;          // relative residual tolerance
  double du_tol = 1e-10;        // displacement stagnation, relative to length_scale
  int newton_budget = 3000;     // total N-R iterations per solve before giving up
  double length_scale = 1.0;    // L0 (mm)
  Kinematics kinematics = Kinematics::PlaneStrain;
  double thickness = 1.0;       // mm
  // Contact penalties; callers set them from eps = factor * E0 / L0.
  double eps_n = 0.0;
  double eps_s = 0.0;
  double g_tol_factor = 1e-3;      // of mean boundary edge length
  double capture_factor = 0.6;     // of mean boundary edge length
  bool contact_fd_stiffness = false;
  int threads = 1;
  bool record_deformed = false;  // keep per-step position snapshots
};

struct ContactRecord {
  int step;
  int pair;
  ContactMode mode;
  double g_n;
  double lambda;
};

struct SolveState {
  Eigen::VectorXd u;                 // compressed dof vector
  bool converged = false;
  std::string failure;               // empty when converged
  std::vector<Vec2> output_path;     // output-node trajectory incl. start
  std::vector<double> residual_history;
  /// Per accepted load step: max penetration after each augmentation.
  std::vector<std::vector<double>> penetration_history;
  std::vector<ContactRecord> contact_records;
  /// Node positions after each accepted step (when record_deformed is set).
  std::vector<std::vector<Vec2>> position_snapshots;
  bool had_active_contact = false;
  bool had_self_contact = false;
  bool had_mutual_contact = false;
  int steps_accepted = 0;
  int newton_iterations = 0;
  double wall_seconds = 0.0;
};

/// Discretized candidate: dof numbering, cached shape-function data at the
/// quadrature points of the undeformed (smoothed) geometry, boundary
/// segments and rigid masters for contact. Immutable during a solve.
class FemModel {
 public:
  FemModel(const Continuum& continuum, const MaterialParams& mat,
           const QuadratureSpec& quad, const SolverOptions& opts);

  int n_dofs() const { return n_dofs_; }
  int dof_of_node(int node, int comp) const;  // -1 when node inactive
  bool is_fixed(int dof) const { return fixed_[dof] != 0; }
  const Continuum& continuum() const { return *continuum_; }
  double mean_boundary_edge() const { return mean_edge_; }
  const SegmentSet& segments() const { return segments_; }
  const RigidSegmentSet& rigid_segments() const { return rigid_; }
  ContactParams contact_params() const;
  int threads() const { return threads_; }

  /// Internal force and (optionally) consistent tangent triplets.
  void assemble(const Eigen::VectorXd& u, Eigen::VectorXd& f_int,
                std::vector<Eigen::Triplet<double>>* triplets) const;

  /// Total stored strain energy at u (for consistency checks).
  double energy(const Eigen::VectorXd& u) const;

  /// Current node positions (smoothed coords + u) for all mesh nodes;
  /// inactive nodes keep their undeformed position.
  std::vector<Vec2> positions(const Eigen::VectorXd& u) const;

  /// Contact force/stiffness of the active set into the residual/tangent.
  void add_contact(const ContactState& state, const Eigen::VectorXd& u,
                   Eigen::VectorXd& f_c, std::vector<Eigen::Triplet<double>>* triplets) const;

  Eigen::VectorXd external_force(const LoadSpec& load, double factor) const;

 private:
  const Continuum* continuum_;
  MaterialParams mat_;
  Kinematics kin_;
  double thickness_;
  int threads_;
  int n_dofs_ = 0;
  std::vector<int> node_dof_;      // 2*mesh_node -> compressed dof or -1
  std::vector<std::uint8_t> fixed_;

  struct CellData {
    int cell;
    std::array<int, 6> nodes;
    // per gauss point: reference weight (area*thickness, signed) and
    // shape-function gradients in undeformed coordinates
    std::vector<double> w0;
    std::vector<std::array<Vec2, 6>> dN;
  };
  std::vector<CellData> cells_;
  SegmentSet segments_;
  RigidSegmentSet rigid_;
  double mean_edge_ = 0.0;
  double eps_n_ = 0.0, eps_s_ = 0.0, g_tol_ = 0.0, capture_ = 0.0;
  bool fd_stiffness_ = false;
};

/// Convenience one-shot assembly: builds the model and returns f_int and K_t.
void assemble(const Continuum& continuum, const Eigen::VectorXd& u,
              const MaterialParams& mat, const QuadratureSpec& quad,
              Eigen::VectorXd& f_int, Eigen::SparseMatrix<double>& K_t,
              const SolverOptions& opts = {});

/// Incremental-loading Newton-Raphson with augmented-Lagrange contact.
/// Non-convergence and augmentation stalls are reported in the returned
/// state (candidates get penalized), not thrown.
SolveState solve(const Continuum& continuum, const MaterialParams& mat,
                 const QuadratureSpec& quad, const LoadSpec& load,
                 const SolverOptions& opts);

}  // namespace ccm
