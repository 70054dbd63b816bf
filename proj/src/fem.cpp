// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/fem.hpp"

#include <Eigen/SparseLU>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "ccmsynth/errors.hpp"
#include "ccmsynth/mvc.hpp"
#include "ccmsynth/parallel.hpp"

namespace ccm {

FemModel::FemModel(const Continuum& continuum, const MaterialParams& mat,
                   const QuadratureSpec& quad, const SolverOptions& opts)
    : continuum_(&continuum),
      mat_(mat),
      kin_(opts.kinematics),
      thickness_(opts.thickness),
      threads_(std::max(1, opts.threads)) {
  const HexMesh& mesh = *continuum.mesh;
  node_dof_.assign(2 * mesh.node_count(), -1);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (!continuum.retained[c]) continue;
    for (int n : mesh.cells[c]) node_dof_[2 * n] = 0;
  }
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (node_dof_[2 * n] == 0) {
      node_dof_[2 * n] = n_dofs_++;
      node_dof_[2 * n + 1] = n_dofs_++;
    }
  }
  fixed_.assign(n_dofs_, 0);
  for (int n : continuum.ports.fixed_nodes) {
    if (n >= 0 && node_dof_[2 * n] >= 0) {
      fixed_[node_dof_[2 * n]] = 1;
      fixed_[node_dof_[2 * n + 1]] = 1;
    }
  }

  const TriangleRule& rule = triangle_rule(quad.gauss_per_triangle);
  std::vector<int> retained_cells;
  for (int c = 0; c < mesh.cell_count(); ++c)
    if (continuum.retained[c]) retained_cells.push_back(c);
  cells_.resize(retained_cells.size());
  std::atomic<int> degenerate_cell{-1};
  parallel_for(static_cast<int>(retained_cells.size()), threads_, [&](int idx) {
    const int c = retained_cells[idx];
    CellData& cd = cells_[idx];
    cd.cell = c;
    cd.nodes = mesh.cells[c];
    std::array<Vec2, 6> poly;
    for (int k = 0; k < 6; ++k) poly[k] = continuum.coords[cd.nodes[k]];
    try {
      const PolygonQuadrature q = polygon_fan_quadrature(poly.data(), 6, rule);
      std::vector<double> vals;
      std::vector<Vec2> grads;
      cd.w0.resize(q.points.size());
      cd.dN.resize(q.points.size());
      for (std::size_t g = 0; g < q.points.size(); ++g) {
        cd.w0[g] = q.weights[g] * thickness_;
        mvc_shape(std::span<const Vec2>(poly.data(), 6), q.points[g], vals, grads);
        for (int k = 0; k < 6; ++k) cd.dN[g][k] = grads[k];
      }
    } catch (const Error&) {
      degenerate_cell.store(c);  // worker threads must not leak exceptions
    }
  });
  if (degenerate_cell.load() >= 0)
    throw DegeneratePolygon("degenerate cell geometry in cell " +
                            std::to_string(degenerate_cell.load()));

  segments_ = build_segments(continuum.boundary);
  mean_edge_ = continuum.mean_boundary_edge();
  rigid_ = discretize_rigid_surfaces(continuum.surfaces, mean_edge_);
  eps_n_ = opts.eps_n;
  eps_s_ = opts.eps_s;
  g_tol_ = opts.g_tol_factor * mean_edge_;
  capture_ = opts.capture_factor * mean_edge_;
  fd_stiffness_ = opts.contact_fd_stiffness;
}

int FemModel::dof_of_node(int node, int comp) const {
  return node_dof_[2 * node + comp];
}

ContactParams FemModel::contact_params() const {
  ContactParams p;
  p.eps_n = eps_n_;
  p.eps_s = eps_s_;
  p.g_tol = g_tol_;
  p.capture_depth = capture_;
  p.fd_stiffness = fd_stiffness_;
  return p;
}

void FemModel::assemble(const Eigen::VectorXd& u, Eigen::VectorXd& f_int,
                        std::vector<Eigen::Triplet<double>>* triplets) const {
  const bool want_K = triplets != nullptr;
  f_int.setZero(n_dofs_);

  struct CellResult {
    Eigen::Matrix<double, 12, 1> f;
    Eigen::Matrix<double, 12, 12> K;
    int bad_cell = -1;
  };
  std::vector<CellResult> results(cells_.size());

  parallel_for(static_cast<int>(cells_.size()), threads_, [&](int idx) {
    const CellData& cd = cells_[idx];
    CellResult& res = results[idx];
    res.f.setZero();
    if (want_K) res.K.setZero();

    Eigen::Matrix<double, 6, 2> ue;
    for (int k = 0; k < 6; ++k) {
      ue(k, 0) = u[node_dof_[2 * cd.nodes[k]]];
      ue(k, 1) = u[node_dof_[2 * cd.nodes[k] + 1]];
    }
    for (std::size_t g = 0; g < cd.w0.size(); ++g) {
      Mat2 H = Mat2::Zero();
      for (int k = 0; k < 6; ++k) {
        H(0, 0) += ue(k, 0) * cd.dN[g][k].x;
        H(0, 1) += ue(k, 0) * cd.dN[g][k].y;
        H(1, 0) += ue(k, 1) * cd.dN[g][k].x;
        H(1, 1) += ue(k, 1) * cd.dN[g][k].y;
      }
      const Mat2 F = Mat2::Identity() + H;
      const double J = F.determinant();
      if (!(J > 1e-12) || !std::isfinite(J)) {
        res.bad_cell = cd.cell;
        return;
      }
      const StressState ss = cauchy_stress(F, mat_, kin_);
      const Mat2 Finv = F.inverse();
      // spatial gradients g_k = F^{-T} dN_k
      std::array<Vec2, 6> gs;
      for (int k = 0; k < 6; ++k) {
        gs[k] = {Finv(0, 0) * cd.dN[g][k].x + Finv(1, 0) * cd.dN[g][k].y,
                 Finv(0, 1) * cd.dN[g][k].x + Finv(1, 1) * cd.dN[g][k].y};
      }
      const double wJ = cd.w0[g] * J;
      for (int k = 0; k < 6; ++k) {
        res.f[2 * k] += wJ * (ss.sigma(0, 0) * gs[k].x + ss.sigma(0, 1) * gs[k].y);
        res.f[2 * k + 1] += wJ * (ss.sigma(1, 0) * gs[k].x + ss.sigma(1, 1) * gs[k].y);
      }
      if (want_K) {
        const Eigen::Matrix3d D = spatial_tangent(F, mat_, kin_);
        for (int a = 0; a < 6; ++a) {
          for (int b = 0; b < 6; ++b) {
            // material part: B_a^T D B_b (voigt xx, yy, xy)
            const double k00 = gs[a].x * (D(0, 0) * gs[b].x + D(0, 2) * gs[b].y) +
                               gs[a].y * (D(2, 0) * gs[b].x + D(2, 2) * gs[b].y);
            const double k01 = gs[a].x * (D(0, 1) * gs[b].y + D(0, 2) * gs[b].x) +
                               gs[a].y * (D(2, 1) * gs[b].y + D(2, 2) * gs[b].x);
            const double k10 = gs[a].y * (D(1, 0) * gs[b].x + D(1, 2) * gs[b].y) +
                               gs[a].x * (D(2, 0) * gs[b].x + D(2, 2) * gs[b].y);
            const double k11 = gs[a].y * (D(1, 1) * gs[b].y + D(1, 2) * gs[b].x) +
                               gs[a].x * (D(2, 1) * gs[b].y + D(2, 2) * gs[b].x);
            // geometric part
            const double kg = gs[a].x * (ss.sigma(0, 0) * gs[b].x + ss.sigma(0, 1) * gs[b].y) +
                              gs[a].y * (ss.sigma(1, 0) * gs[b].x + ss.sigma(1, 1) * gs[b].y);
            res.K(2 * a, 2 * b) += wJ * (k00 + kg);
            res.K(2 * a, 2 * b + 1) += wJ * k01;
            res.K(2 * a + 1, 2 * b) += wJ * k10;
            res.K(2 * a + 1, 2 * b + 1) += wJ * (k11 + kg);
          }
        }
      }
    }
  });

  for (std::size_t idx = 0; idx < cells_.size(); ++idx) {
    if (results[idx].bad_cell >= 0) throw NonPositiveJacobian(results[idx].bad_cell);
  }
  for (std::size_t idx = 0; idx < cells_.size(); ++idx) {
    const CellData& cd = cells_[idx];
    const CellResult& res = results[idx];
    int dofs[12];
    for (int k = 0; k < 6; ++k) {
      dofs[2 * k] = node_dof_[2 * cd.nodes[k]];
      dofs[2 * k + 1] = node_dof_[2 * cd.nodes[k] + 1];
    }
    for (int r = 0; r < 12; ++r) f_int[dofs[r]] += res.f[r];
    if (want_K) {
      for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c)
          triplets->emplace_back(dofs[r], dofs[c], res.K(r, c));
    }
  }
}

double FemModel::energy(const Eigen::VectorXd& u) const {
  double E = 0.0;
  for (const CellData& cd : cells_) {
    Eigen::Matrix<double, 6, 2> ue;
    for (int k = 0; k < 6; ++k) {
      ue(k, 0) = u[node_dof_[2 * cd.nodes[k]]];
      ue(k, 1) = u[node_dof_[2 * cd.nodes[k] + 1]];
    }
    for (std::size_t g = 0; g < cd.w0.size(); ++g) {
      Mat2 H = Mat2::Zero();
      for (int k = 0; k < 6; ++k) {
        H(0, 0) += ue(k, 0) * cd.dN[g][k].x;
        H(0, 1) += ue(k, 0) * cd.dN[g][k].y;
        H(1, 0) += ue(k, 1) * cd.dN[g][k].x;
        H(1, 1) += ue(k, 1) * cd.dN[g][k].y;
      }
      E += cd.w0[g] * strain_energy(Mat2::Identity() + H, mat_, kin_);
    }
  }
  return E;
}

std::vector<Vec2> FemModel::positions(const Eigen::VectorXd& u) const {
  std::vector<Vec2> pos = continuum_->coords;
  for (int n = 0; n < continuum_->mesh->node_count(); ++n) {
    const int d = node_dof_[2 * n];
    if (d >= 0) {
      pos[n].x += u[d];
      pos[n].y += u[node_dof_[2 * n + 1]];
    }
  }
  return pos;
}

void FemModel::add_contact(const ContactState& state, const Eigen::VectorXd& u,
                           Eigen::VectorXd& f_c,
                           std::vector<Eigen::Triplet<double>>* triplets) const {
  if (state.active.empty()) return;
  const std::vector<Vec2> pos = positions(u);
  const ContactParams params = contact_params();
  for (const ContactPair& pair : state.active) {
    const PairForce pf = contact_force_and_stiffness(pair, segments_, rigid_, pos, params);
    int dofs[8];
    dofs[0] = node_dof_[2 * segments_.nodes[pair.slave_seg][0]];
    dofs[1] = node_dof_[2 * segments_.nodes[pair.slave_seg][0] + 1];
    dofs[2] = node_dof_[2 * segments_.nodes[pair.slave_seg][1]];
    dofs[3] = node_dof_[2 * segments_.nodes[pair.slave_seg][1] + 1];
    if (pair.master_rigid) {
      dofs[4] = dofs[5] = dofs[6] = dofs[7] = -1;
    } else {
      dofs[4] = node_dof_[2 * segments_.nodes[pair.master][0]];
      dofs[5] = node_dof_[2 * segments_.nodes[pair.master][0] + 1];
      dofs[6] = node_dof_[2 * segments_.nodes[pair.master][1]];
      dofs[7] = node_dof_[2 * segments_.nodes[pair.master][1] + 1];
    }
    for (int r = 0; r < 8; ++r) {
      if (dofs[r] < 0) continue;
      f_c[dofs[r]] += pf.f[r];
      if (triplets) {
        for (int c = 0; c < 8; ++c) {
          if (dofs[c] < 0) continue;
          triplets->emplace_back(dofs[r], dofs[c], pf.k[r][c]);
        }
      }
    }
  }
}

Eigen::VectorXd FemModel::external_force(const LoadSpec& load, double factor) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dofs_);
  if (load.node < 0 || node_dof_[2 * load.node] < 0)
    throw InvalidArgument("load node not part of the continuum");
  const Vec2 dir = normalized(load.direction);
  f[node_dof_[2 * load.node]] = dir.x * load.magnitude * factor;
  f[node_dof_[2 * load.node + 1]] = dir.y * load.magnitude * factor;
  return f;
}

void assemble(const Continuum& continuum, const Eigen::VectorXd& u,
              const MaterialParams& mat, const QuadratureSpec& quad,
              Eigen::VectorXd& f_int, Eigen::SparseMatrix<double>& K_t,
              const SolverOptions& opts) {
  FemModel model(continuum, mat, quad, opts);
  std::vector<Eigen::Triplet<double>> trips;
  model.assemble(u, f_int, &trips);
  K_t.resize(model.n_dofs(), model.n_dofs());
  K_t.setFromTriplets(trips.begin(), trips.end());
}

namespace {

struct NewtonOutcome {
  bool ok = false;
  std::string why;
  double residual = 0.0;
  int iterations = 0;
};

// One Newton-Raphson solve at fixed load factor, active set refreshed every
// iteration. u is updated in place on success or failure.
NewtonOutcome newton_solve(const FemModel& model, const LoadSpec& load, double factor,
                           const SolverOptions& opts, ContactState& cstate,
                           Eigen::VectorXd& u) {
  NewtonOutcome out;
  const int n = model.n_dofs();
  const Eigen::VectorXd f_ext = model.external_force(load, factor);
  double f_ref = 0.0;
  for (int i = 0; i < n; ++i)
    if (!model.is_fixed(i)) f_ref += f_ext[i] * f_ext[i];
  f_ref = std::sqrt(f_ref);
  const double r_tol = std::max(opts.tol_r * f_ref, 1e-12);
  const ContactParams cparams = model.contact_params();

  Eigen::VectorXd f_int(n), R(n);
  Eigen::SparseMatrix<double> K(n, n);
  std::vector<Eigen::Triplet<double>> trips;

  for (int it = 0; it <= opts.max_newton; ++it) {
    Eigen::VectorXd f_c = Eigen::VectorXd::Zero(n);
    trips.clear();
    try {
      const std::vector<Vec2> pos = model.positions(u);
      detect_pairs(model.segments(), pos, model.rigid_segments(), cparams, cstate,
                   model.threads());
      model.assemble(u, f_int, &trips);
      model.add_contact(cstate, u, f_c, &trips);
    } catch (const Error& e) {
      out.why = e.what();
      return out;
    }
    R = f_int + f_c - f_ext;
    for (int i = 0; i < n; ++i)
      if (model.is_fixed(i)) R[i] = 0.0;
    const double rnorm = R.norm();
    out.residual = rnorm;
    out.iterations = it;
    if (!std::isfinite(rnorm)) {
      out.why = "non-finite residual";
      return out;
    }
    if (rnorm > 1e6 * std::max(1.0, f_ref)) {
      out.why = "residual diverged";
      return out;
    }
    if (rnorm <= r_tol) {
      out.ok = true;
      return out;
    }
    if (it == opts.max_newton) break;

    // Dirichlet rows/columns: drop couplings, unit diagonal.
    std::vector<Eigen::Triplet<double>> reduced;
    reduced.reserve(trips.size() + n);
    for (const auto& t : trips) {
      if (model.is_fixed(t.row()) || model.is_fixed(t.col())) continue;
      reduced.push_back(t);
    }
    for (int i = 0; i < n; ++i)
      if (model.is_fixed(i)) reduced.emplace_back(i, i, 1.0);
    K.setFromTriplets(reduced.begin(), reduced.end());

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success) {
      out.why = "singular tangent";
      return out;
    }
    const Eigen::VectorXd du = lu.solve(-R);
    if (!du.allFinite()) {
      out.why = "linear solve failed";
      return out;
    }
    u += du;
    if (du.norm() <= opts.du_tol * opts.length_scale) {
      // displacement stagnation accepted as secondary convergence signal
      out.ok = true;
      out.iterations = it + 1;
      return out;
    }
  }
  out.why = "newton did not converge";
  return out;
}

}  // namespace

SolveState solve(const Continuum& continuum, const MaterialParams& mat,
                 const QuadratureSpec& quad, const LoadSpec& load,
                 const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  FemModel model(continuum, mat, quad, opts);
  SolveState state;
  state.u.setZero(model.n_dofs());

  ContactState cstate;
  cstate.reset(model.segments().size());
  const ContactParams cparams = model.contact_params();

  const Vec2 out0 = continuum.coords[continuum.ports.output_node];
  state.output_path.push_back(out0);

  const double base = 1.0 / opts.n_steps;
  double gamma = 0.0;
  double delta = base;
  int halvings = 0;
  int step_index = 0;

  while (gamma < 1.0 - 1e-12) {
    const double target = std::min(gamma + delta, 1.0);
    Eigen::VectorXd u_try = state.u;
    ContactState c_try = cstate;

    bool step_ok = false;
    std::string why;
    std::vector<double> pen_history;
    for (int aug = 0; aug < opts.max_augmentations; ++aug) {
      if (state.newton_iterations > opts.newton_budget) {
        state.converged = false;
        state.failure = "newton iteration budget exhausted";
        state.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return state;
      }
      const NewtonOutcome nr = newton_solve(model, load, target, opts, c_try, u_try);
      state.newton_iterations += nr.iterations;
      if (!nr.ok) {
        why = nr.why;
        break;
      }
      // Measure penetration of the converged state.
      const std::vector<Vec2> pos = model.positions(u_try);
      detect_pairs(model.segments(), pos, model.rigid_segments(), cparams, c_try,
                   model.threads());
      const double pen = c_try.max_penetration();
      pen_history.push_back(pen);
      state.residual_history.push_back(nr.residual);
      if (c_try.active.empty() || pen <= cparams.g_tol) {
        step_ok = true;
        break;
      }
      if (pen_history.size() >= 2 && pen > 1.5 * pen_history[pen_history.size() - 2]) {
        why = "augmentation stall (penetration increasing)";
        break;
      }
      c_try.update_multipliers();
      if (aug == opts.max_augmentations - 1) why = "augmentation stall (g_tol not met)";
    }

    if (step_ok) {
      state.u = u_try;
      cstate = c_try;
      gamma = target;
      ++step_index;
      state.steps_accepted = step_index;
      state.penetration_history.push_back(pen_history);
      const std::vector<Vec2> pos = model.positions(state.u);
      state.output_path.push_back(pos[continuum.ports.output_node]);
      if (opts.record_deformed) state.position_snapshots.push_back(pos);
      int pair_id = 0;
      for (const ContactPair& p : cstate.active) {
        state.contact_records.push_back({step_index, pair_id++, p.mode, p.g_n, p.lambda});
        state.had_active_contact = true;
        if (p.mode == ContactMode::Self) state.had_self_contact = true;
        else state.had_mutual_contact = true;
      }
      if (delta < base) delta = std::min(base, 2.0 * delta);
      halvings = 0;
    } else {
      ++halvings;
      if (halvings > opts.max_halvings) {
        state.converged = false;
        state.failure = why.empty() ? "newton did not converge" : why;
        state.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return state;
      }
      delta *= 0.5;
    }
  }

  state.converged = true;
  state.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return state;
}

}  // namespace ccm
