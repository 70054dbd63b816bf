// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/optimizer.hpp"

#include <algorithm>
#include <sstream>

#include "ccmsynth/errors.hpp"

namespace ccm {

std::string Rng::state() const {
  std::ostringstream os;
  os << eng_;
  return os.str();
}

void Rng::set_state(const std::string& s) {
  std::istringstream is(s);
  is >> eng_;
  if (is.fail()) throw IoError("bad RNG state string");
}

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Draws are consumed in a fixed order per variable: eta always; c (and a
// sign where applicable) only when the variable mutates.
void mutate_continuous(double& p, double lo, double hi, double scale,
                       const SearchConfig& cfg, Rng& rng) {
  const double eta = rng.uniform01();
  if (eta >= cfg.pr) return;
  const double c = rng.uniform01();
  const double sign = rng.uniform01() < 0.5 ? 1.0 : -1.0;
  p = clamp(p + sign * c * scale, lo, hi);
}

}  // namespace

DesignVector mutate(const DesignVector& v, const SearchConfig& cfg, Rng& rng) {
  DesignVector out = v;
  const VariableBounds& b = cfg.bounds;
  for (Mask& m : out.masks) {
    mutate_continuous(m.x, b.x_min, b.x_max, cfg.m_max, cfg, rng);
    mutate_continuous(m.y, b.y_min, b.y_max, cfg.m_max, cfg, rng);
    mutate_continuous(m.r, b.r_min, b.r_max, cfg.m_max, cfg, rng);
    const double eta_s = rng.uniform01();
    if (eta_s < cfg.pr) {
      const double c = rng.uniform01();
      m.s = c > 0.5 ? 1 : 0;
    }
    mutate_continuous(m.f, 0.0, b.f_max, cfg.f_mut_scale, cfg, rng);
  }
  mutate_continuous(out.force_magnitude, -b.force_max, b.force_max, cfg.m_max, cfg, rng);
  return out;
}

FeasibilityResult feasibility(const Continuum& continuum, int beta) {
  FeasibilityResult res;
  const HexMesh& mesh = *continuum.mesh;

  // Connected components over retained cells (edge adjacency).
  std::vector<int> comp(mesh.cell_count(), -1);
  int n_comp = 0;
  std::vector<int> stack;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (!continuum.retained[c] || comp[c] >= 0) continue;
    stack.push_back(c);
    comp[c] = n_comp;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      for (int nb : mesh.neighbors[cur]) {
        if (nb >= 0 && continuum.retained[nb] && comp[nb] < 0) {
          comp[nb] = n_comp;
          stack.push_back(nb);
        }
      }
    }
    ++n_comp;
  }

  // A node's component: any incident retained cell (all incident retained
  // cells share a component by honeycomb edge-connectivity).
  auto node_component = [&](int node) -> int {
    if (node < 0 || node >= mesh.node_count()) return -1;
    for (int c : mesh.node_cells[node]) {
      if (continuum.retained[c]) return comp[c];
    }
    return -1;
  };

  const int in_comp = node_component(continuum.ports.input_node);
  if (in_comp < 0) {
    res.reason = "no-input-port";
    return res;
  }
  const int out_comp = node_component(continuum.ports.output_node);
  if (out_comp < 0) {
    res.reason = "no-output-port";
    return res;
  }
  bool any_fixed = false;
  bool fixed_in_comp = false;
  for (int n : continuum.ports.fixed_nodes) {
    const int fc = node_component(n);
    if (fc >= 0) any_fixed = true;
    if (fc == in_comp) fixed_in_comp = true;
  }
  if (!any_fixed) {
    res.reason = "no-fixed-dofs";
    return res;
  }
  if (out_comp != in_comp || !fixed_in_comp) {
    res.reason = "disconnected";
    return res;
  }

  // Remove dangling islands outside the port component, then rebuild so the
  // remaining cells start from their regular shapes again.
  CellMask pruned(mesh.cell_count(), 0);
  int kept = 0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (continuum.retained[c] && comp[c] == in_comp) {
      pruned[c] = 1;
      ++kept;
    }
  }
  if (kept == 0) {
    res.reason = "no-input-port";
    return res;
  }
  res.feasible = true;
  if (kept == continuum.retained_count()) {
    res.continuum = continuum;
  } else {
    res.continuum = smooth_boundary(
        make_continuum(mesh, std::move(pruned), continuum.surfaces, continuum.ports), beta);
  }
  return res;
}

Continuum build_candidate(const DesignVector& v, const Problem& problem) {
  Continuum c = two_stage_removal(*problem.mesh, v.masks, rigid_surfaces(v.masks),
                                  problem.ports, problem.beta, problem.stage_two_removal);
  FeasibilityResult fr = feasibility(c, problem.beta);
  if (!fr.feasible) throw Error("infeasible: " + fr.reason);
  return std::move(fr.continuum);
}

EvalResult evaluate(const DesignVector& v, const Problem& problem) {
  EvalResult r;
  r.objective = problem.penalty;
  Continuum cont;
  try {
    cont = two_stage_removal(*problem.mesh, v.masks, rigid_surfaces(v.masks),
                             problem.ports, problem.beta, problem.stage_two_removal);
  } catch (const FlippedElement& e) {
    r.reason = e.what();
    return r;
  } catch (const EmptyContinuum&) {
    r.reason = "empty-continuum";
    return r;
  }
  FeasibilityResult fr = feasibility(cont, problem.beta);
  if (!fr.feasible) {
    r.reason = fr.reason;
    return r;
  }
  r.feasible = true;
  r.volume_fraction = fr.continuum.volume_fraction();

  LoadSpec load;
  load.node = problem.ports.input_node;
  load.direction = problem.ports.input_direction;
  load.magnitude = v.force_magnitude;

  SolveState ss;
  try {
    ss = solve(fr.continuum, problem.material, problem.quadrature, load, problem.solver);
  } catch (const Error& e) {
    r.reason = e.what();
    return r;
  }
  r.solve_seconds = ss.wall_seconds;
  if (!ss.converged) {
    r.reason = ss.failure.empty() ? "non-convergence" : ss.failure;
    return r;
  }
  r.solved = true;
  r.had_active_contact = ss.had_active_contact;
  r.had_self_contact = ss.had_self_contact;
  r.had_mutual_contact = ss.had_mutual_contact;
  r.path = ss.output_path;

  try {
    const PathDescriptor actual = descriptor(close_path({ss.output_path}), problem.n_harmonics);
    r.breakdown = objective_breakdown(actual, problem.specified, problem.weights,
                                      r.volume_fraction);
    r.objective = r.breakdown.total;
  } catch (const Error& e) {
    r.reason = std::string("path: ") + e.what();
    r.objective = problem.penalty;
    return r;
  }
  return r;
}

SearchResult hill_climb(const DesignVector& v0, const SearchConfig& cfg,
                        const Problem& problem, const IterationCallback& on_iteration) {
  if (cfg.max_evals < 1) throw InvalidArgument("evaluation budget must be >= 1");
  Rng rng(cfg.seed);

  SearchResult result;
  result.best = v0;
  result.best_eval = evaluate(v0, problem);
  result.best_objective = result.best_eval.objective;
  TraceRow row{0, result.best_eval.feasible, result.best_eval.objective,
               result.best_objective, true};
  result.trace.push_back(row);
  if (on_iteration) on_iteration(row, result.best_eval, result.best, rng);

  for (int it = 1; it < cfg.max_evals; ++it) {
    const DesignVector v_new = mutate(result.best, cfg, rng);
    const EvalResult e = evaluate(v_new, problem);
    const bool accept = e.objective < result.best_objective;
    if (accept) {
      result.best = v_new;
      result.best_objective = e.objective;
      result.best_eval = e;
    }
    TraceRow r{it, e.feasible, e.objective, result.best_objective, accept};
    result.trace.push_back(r);
    if (on_iteration) on_iteration(r, e, result.best, rng);
  }
  return result;
}

}  // namespace ccm
