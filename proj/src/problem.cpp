// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/problem.hpp"

#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccmsynth/errors.hpp"
#include "ccmsynth/svg.hpp"

namespace fs = std::filesystem;

namespace ccm {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string resolve_path(const std::string& p, const std::string& dir) {
  if (p.empty() || dir.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(dir) / p).string();
}

int env_threads() {
  const char* v = std::getenv("CCMSYNTH_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

}  // namespace

ProblemSpec parse_spec_stream(std::istream& is, const std::string& dir_hint) {
  ProblemSpec spec;
  std::string line;
  int line_no = 0;
  bool any_fix_box = false;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;

    auto want = [&](auto&... vals) {
      (ls >> ... >> vals);
      if (ls.fail()) throw SpecParseError(line_no, "malformed value for key '" + key + "'");
    };
    auto rest = [&]() {
      std::string v;
      std::getline(ls, v);
      const auto b = v.find_first_not_of(" \t");
      return b == std::string::npos ? std::string() : v.substr(b);
    };

    if (key == "domain_cells") want(spec.nx, spec.ny);
    else if (key == "cell_circumradius") want(spec.cell_circumradius);
    else if (key == "mask_grid") want(spec.mask_nx, spec.mask_ny);
    else if (key == "mask_r_min") want(spec.mask_r_min);
    else if (key == "mask_r_max") want(spec.mask_r_max);
    else if (key == "youngs_modulus") want(spec.youngs_modulus);
    else if (key == "poisson_ratio") want(spec.poisson_ratio);
    else if (key == "thickness") want(spec.thickness);
    else if (key == "kinematics") want(spec.kinematics);
    else if (key == "volume_fraction") want(spec.volume_fraction);
    else if (key == "input_point") want(spec.input_point.x, spec.input_point.y);
    else if (key == "input_dir") want(spec.input_dir.x, spec.input_dir.y);
    else if (key == "output_point") want(spec.output_point.x, spec.output_point.y);
    else if (key == "fix_box") {
      if (!any_fix_box) { spec.fix_boxes.clear(); any_fix_box = true; }
      std::array<double, 4> box{};
      want(box[0], box[1], box[2], box[3]);
      spec.fix_boxes.push_back(box);
    }
    else if (key == "path_file") spec.path_file = resolve_path(rest(), dir_hint);
    else if (key == "stage2_removal") want(spec.stage2_removal);
    else if (key == "beta") want(spec.beta);
    else if (key == "gauss_points") want(spec.gauss_points);
    else if (key == "load_steps") want(spec.load_steps);
    else if (key == "max_newton") want(spec.max_newton);
    else if (key == "newton_tol") want(spec.newton_tol);
    else if (key == "max_halvings") want(spec.max_halvings);
    else if (key == "max_augmentations") want(spec.max_augmentations);
    else if (key == "eps_n_factor") want(spec.eps_n_factor);
    else if (key == "eps_s_factor") want(spec.eps_s_factor);
    else if (key == "g_tol_factor") want(spec.g_tol_factor);
    else if (key == "capture_factor") want(spec.capture_factor);
    else if (key == "contact_fd_stiffness") want(spec.contact_fd_stiffness);
    else if (key == "n_harmonics") want(spec.n_harmonics);
    else if (key == "w_a") want(spec.w_a);
    else if (key == "w_b") want(spec.w_b);
    else if (key == "w_L") want(spec.w_L);
    else if (key == "w_theta") want(spec.w_theta);
    else if (key == "lambda_v") want(spec.lambda_v);
    else if (key == "seed") want(spec.seed);
    else if (key == "max_evals") want(spec.max_evals);
    else if (key == "mutation_probability") want(spec.mutation_probability);
    else if (key == "m_max") want(spec.m_max);
    else if (key == "f_mutation_scale") want(spec.f_mutation_scale);
    else if (key == "f_max") want(spec.f_max);
    else if (key == "force_max") want(spec.force_max);
    else if (key == "force_initial") want(spec.force_initial);
    else if (key == "penalty") want(spec.penalty);
    else if (key == "checkpoint_every") want(spec.checkpoint_every);
    else if (key == "initial_radius") want(spec.initial_radius);
    else if (key == "initial_s") want(spec.initial_s);
    else if (key == "initial_f") want(spec.initial_f);
    else if (key == "initial_design") spec.initial_design = resolve_path(rest(), dir_hint);
    else throw SpecParseError(line_no, "unknown key '" + key + "'");
  }
  return spec;
}

ProblemSpec parse_spec(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw IoError("cannot read spec file " + file);
  return parse_spec_stream(is, fs::path(file).parent_path().string());
}

void emit_spec(std::ostream& os, const ProblemSpec& s) {
  os << "# ccmsynth problem spec\n";
  os << "domain_cells " << s.nx << ' ' << s.ny << '\n';
  os << "cell_circumradius " << fmt(s.cell_circumradius) << '\n';
  os << "mask_grid " << s.mask_nx << ' ' << s.mask_ny << '\n';
  os << "mask_r_min " << fmt(s.mask_r_min) << '\n';
  os << "mask_r_max " << fmt(s.mask_r_max) << '\n';
  os << "youngs_modulus " << fmt(s.youngs_modulus) << '\n';
  os << "poisson_ratio " << fmt(s.poisson_ratio) << '\n';
  os << "thickness " << fmt(s.thickness) << '\n';
  os << "kinematics " << s.kinematics << '\n';
  os << "volume_fraction " << fmt(s.volume_fraction) << '\n';
  os << "input_point " << fmt(s.input_point.x) << ' ' << fmt(s.input_point.y) << '\n';
  os << "input_dir " << fmt(s.input_dir.x) << ' ' << fmt(s.input_dir.y) << '\n';
  os << "output_point " << fmt(s.output_point.x) << ' ' << fmt(s.output_point.y) << '\n';
  for (const auto& b : s.fix_boxes)
    os << "fix_box " << fmt(b[0]) << ' ' << fmt(b[1]) << ' ' << fmt(b[2]) << ' ' << fmt(b[3]) << '\n';
  os << "path_file " << s.path_file << '\n';
  os << "stage2_removal " << s.stage2_removal << '\n';
  os << "beta " << s.beta << '\n';
  os << "gauss_points " << s.gauss_points << '\n';
  os << "load_steps " << s.load_steps << '\n';
  os << "max_newton " << s.max_newton << '\n';
  os << "newton_tol " << fmt(s.newton_tol) << '\n';
  os << "max_halvings " << s.max_halvings << '\n';
  os << "max_augmentations " << s.max_augmentations << '\n';
  os << "eps_n_factor " << fmt(s.eps_n_factor) << '\n';
  os << "eps_s_factor " << fmt(s.eps_s_factor) << '\n';
  os << "g_tol_factor " << fmt(s.g_tol_factor) << '\n';
  os << "capture_factor " << fmt(s.capture_factor) << '\n';
  os << "contact_fd_stiffness " << s.contact_fd_stiffness << '\n';
  os << "n_harmonics " << s.n_harmonics << '\n';
  os << "w_a " << fmt(s.w_a) << '\n';
  os << "w_b " << fmt(s.w_b) << '\n';
  os << "w_L " << fmt(s.w_L) << '\n';
  os << "w_theta " << fmt(s.w_theta) << '\n';
  os << "lambda_v " << fmt(s.lambda_v) << '\n';
  os << "seed " << s.seed << '\n';
  os << "max_evals " << s.max_evals << '\n';
  os << "mutation_probability " << fmt(s.mutation_probability) << '\n';
  os << "m_max " << fmt(s.m_max) << '\n';
  os << "f_mutation_scale " << fmt(s.f_mutation_scale) << '\n';
  os << "f_max " << fmt(s.f_max) << '\n';
  os << "force_max " << fmt(s.force_max) << '\n';
  os << "force_initial " << fmt(s.force_initial) << '\n';
  os << "penalty " << fmt(s.penalty) << '\n';
  os << "checkpoint_every " << s.checkpoint_every << '\n';
  os << "initial_radius " << fmt(s.initial_radius) << '\n';
  os << "initial_s " << s.initial_s << '\n';
  os << "initial_f " << fmt(s.initial_f) << '\n';
  os << "initial_design " << s.initial_design << '\n';
}

namespace {

int snap_to_node(const HexMesh& mesh, Vec2 p, const char* what) {
  int best = -1;
  double best_d = std::numeric_limits<double>::max();
  for (int n = 0; n < mesh.node_count(); ++n) {
    const double d = norm(mesh.nodes[n] - p);
    if (d < best_d) {
      best_d = d;
      best = n;
    }
  }
  if (best < 0 || best_d > 1.5 * mesh.circumradius)
    throw Error(std::string(what) + " does not reference a mesh node");
  return best;
}

DesignVector grid_initial_design(const ProblemSpec& spec, const HexMesh& mesh) {
  DesignVector v;
  const double Lx = mesh.domain_size.x;
  const double Ly = mesh.domain_size.y;
  const double pitch_x = Lx / spec.mask_nx;
  const double pitch_y = Ly / spec.mask_ny;
  double r0 = spec.initial_radius;
  if (r0 <= 0.0) r0 = 0.5 * std::min(pitch_x, pitch_y);
  r0 = std::clamp(r0, spec.mask_r_min, spec.mask_r_max);
  for (int i = 0; i < spec.mask_nx; ++i) {
    for (int j = 0; j < spec.mask_ny; ++j) {
      Mask m;
      m.x = (i + 0.5) * pitch_x;
      m.y = (j + 0.5) * pitch_y;
      m.r = r0;
      m.s = spec.initial_s;
      m.f = spec.initial_f;
      v.masks.push_back(m);
    }
  }
  v.force_magnitude = spec.force_initial;
  return v;
}

}  // namespace

BuiltProblem build_problem(const ProblemSpec& spec, const RunOverrides& ov) {
  ProblemSpec s = spec;
  if (ov.seed) s.seed = *ov.seed;
  if (ov.max_evals) s.max_evals = *ov.max_evals;
  if (ov.gauss_points) s.gauss_points = *ov.gauss_points;
  if (ov.beta) s.beta = *ov.beta;
  if (ov.mesh_scale > 1) {
    s.nx *= ov.mesh_scale;
    s.ny *= ov.mesh_scale;
    s.cell_circumradius /= ov.mesh_scale;
  }

  BuiltProblem built;
  built.spec = s;
  built.mesh = std::make_shared<const HexMesh>(
      generate_honeycomb(s.nx, s.ny, s.cell_circumradius));
  const HexMesh& mesh = *built.mesh;

  Attachments ports;
  ports.input_node = snap_to_node(mesh, s.input_point, "input_point");
  ports.output_node = snap_to_node(mesh, s.output_point, "output_point");
  if (norm(s.input_dir) == 0.0) throw Error("input_dir must be nonzero");
  ports.input_direction = normalized(s.input_dir);
  for (const auto& b : s.fix_boxes) {
    for (int n = 0; n < mesh.node_count(); ++n) {
      const Vec2 p = mesh.nodes[n];
      if (p.x >= b[0] && p.y >= b[1] && p.x <= b[2] && p.y <= b[3])
        ports.fixed_nodes.push_back(n);
    }
  }
  if (ports.fixed_nodes.empty()) throw Error("fix_box set contains no mesh nodes");

  Problem& prob = built.problem;
  prob.mesh = built.mesh.get();
  prob.ports = ports;
  prob.material = {s.youngs_modulus, s.poisson_ratio};
  prob.quadrature.gauss_per_triangle = s.gauss_points;
  prob.beta = s.beta;
  prob.stage_two_removal = s.stage2_removal != 0;
  prob.n_harmonics = s.n_harmonics;
  prob.penalty = s.penalty;
  prob.weights = {s.w_a, s.w_b, s.w_L, s.w_theta, s.lambda_v, s.volume_fraction};

  SolverOptions& so = prob.solver;
  so.n_steps = s.load_steps;
  so.max_newton = s.max_newton;
  so.max_halvings = s.max_halvings;
  so.max_augmentations = s.max_augmentations;
  so.tol_r = s.newton_tol;
  so.length_scale = mesh.characteristic_length();
  so.kinematics = s.kinematics == "plane_stress" ? Kinematics::PlaneStress
                                                 : Kinematics::PlaneStrain;
  so.thickness = s.thickness;
  so.eps_n = s.eps_n_factor * s.youngs_modulus / so.length_scale;
  so.eps_s = s.eps_s_factor * s.youngs_modulus / so.length_scale;
  so.g_tol_factor = s.g_tol_factor;
  so.capture_factor = s.capture_factor;
  so.contact_fd_stiffness = s.contact_fd_stiffness != 0;
  so.threads = env_threads();

  if (s.path_file.empty()) throw Error("spec is missing path_file");
  built.specified_path = load_path_csv(s.path_file);
  built.problem.specified = descriptor(close_path(built.specified_path), s.n_harmonics);
  built.problem.specified_open_length = built.problem.specified.L;

  SearchConfig& sc = built.search;
  sc.pr = s.mutation_probability;
  sc.m_max = s.m_max;
  sc.f_mut_scale = s.f_mutation_scale;
  sc.max_evals = s.max_evals;
  sc.seed = s.seed;
  sc.penalty = s.penalty;
  sc.checkpoint_every = s.checkpoint_every;
  sc.bounds.x_min = 0.0;
  sc.bounds.x_max = mesh.domain_size.x;
  sc.bounds.y_min = 0.0;
  sc.bounds.y_max = mesh.domain_size.y;
  sc.bounds.r_min = s.mask_r_min;
  sc.bounds.r_max = s.mask_r_max;
  sc.bounds.f_max = s.f_max;
  sc.bounds.force_max = s.force_max;

  built.initial_design = s.initial_design.empty() ? grid_initial_design(s, mesh)
                                                  : load_design(s.initial_design);
  return built;
}

Analysis analyze_design(const DesignVector& v, const Problem& problem,
                        bool record_deformed) {
  Analysis a;
  a.eval.objective = problem.penalty;
  Continuum cont;
  try {
    cont = two_stage_removal(*problem.mesh, v.masks, rigid_surfaces(v.masks),
                             problem.ports, problem.beta, problem.stage_two_removal);
  } catch (const FlippedElement& e) {
    a.eval.reason = e.what();
    return a;
  } catch (const EmptyContinuum&) {
    a.eval.reason = "empty-continuum";
    return a;
  }
  FeasibilityResult fr = feasibility(cont, problem.beta);
  if (!fr.feasible) {
    a.eval.reason = fr.reason;
    return a;
  }
  a.eval.feasible = true;
  a.continuum = std::move(fr.continuum);
  a.eval.volume_fraction = a.continuum.volume_fraction();

  LoadSpec load{problem.ports.input_node, problem.ports.input_direction, v.force_magnitude};
  SolverOptions opts = problem.solver;
  opts.record_deformed = record_deformed;
  try {
    a.solve_state = solve(a.continuum, problem.material, problem.quadrature, load, opts);
  } catch (const Error& e) {
    a.eval.reason = e.what();
    return a;
  }
  a.eval.solve_seconds = a.solve_state.wall_seconds;
  if (!a.solve_state.converged) {
    a.eval.reason = a.solve_state.failure;
    return a;
  }
  a.eval.solved = true;
  a.eval.had_active_contact = a.solve_state.had_active_contact;
  a.eval.had_self_contact = a.solve_state.had_self_contact;
  a.eval.had_mutual_contact = a.solve_state.had_mutual_contact;
  a.eval.path = a.solve_state.output_path;
  try {
    const PathDescriptor actual =
        descriptor(close_path({a.solve_state.output_path}), problem.n_harmonics);
    a.eval.breakdown = objective_breakdown(actual, problem.specified, problem.weights,
                                           a.eval.volume_fraction);
    a.eval.objective = a.eval.breakdown.total;
  } catch (const Error& e) {
    a.eval.reason = std::string("path: ") + e.what();
    a.eval.objective = problem.penalty;
  }
  return a;
}

namespace {

void write_contact_report(const std::string& file, const SolveState& ss) {
  std::ofstream os(file);
  if (!os) throw IoError("cannot write " + file);
  os << "step,pair,mode,g_n,lambda\n";
  for (const ContactRecord& r : ss.contact_records) {
    os << r.step << ',' << r.pair << ','
       << (r.mode == ContactMode::Mutual ? "mutual" : "self") << ',' << fmt(r.g_n)
       << ',' << fmt(r.lambda) << '\n';
  }
}

void write_analysis_artifacts(const fs::path& dir, const Analysis& a,
                              const DesignVector& design, const Problem& problem,
                              const RunOverrides& ov) {
  if (!a.eval.feasible) return;
  save_path_csv((dir / "path_actual.csv").string(), a.eval.path);
  write_topology_svg((dir / "topology.svg").string(), a.continuum, design.masks);
  write_contact_report((dir / "contact_report.csv").string(), a.solve_state);
  save_descriptor_csv((dir / "descriptor_specified.csv").string(), problem.specified);
  if (a.eval.solved) {
    try {
      save_descriptor_csv((dir / "descriptor_actual.csv").string(),
                          descriptor(close_path({a.eval.path}), problem.n_harmonics));
    } catch (const Error&) {
      // degenerate traced path: no actual descriptor to dump
    }
  }

  const auto& snaps = a.solve_state.position_snapshots;
  if (!snaps.empty()) {
    const char* names[3] = {"deform_A.svg", "deform_B.svg", "deform_C.svg"};
    const std::size_t idx[3] = {snaps.size() / 3, (2 * snaps.size()) / 3, snaps.size() - 1};
    for (int k = 0; k < 3; ++k) {
      const std::size_t i = std::min(idx[k], snaps.size() - 1);
      const std::vector<Vec2> path_upto(a.eval.path.begin(),
                                        a.eval.path.begin() + i + 2);
      write_deformed_svg((dir / names[k]).string(), a.continuum, snaps[i], path_upto);
    }
    if (ov.dump_displacements) {
      for (std::size_t i = 0; i < snaps.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "displacement_step_%03zu.csv", i + 1);
        std::ofstream os(dir / name);
        os << "node,x,y\n";
        for (std::size_t n = 0; n < snaps[i].size(); ++n)
          os << n << ',' << fmt(snaps[i][n].x) << ',' << fmt(snaps[i][n].y) << '\n';
      }
    }
  }
}

void write_failed_marker(const fs::path& dir, const std::string& why) {
  std::ofstream os(dir / "FAILED");
  os << why << '\n';
}

}  // namespace

int run_synthesis(const std::string& spec_file, const RunOverrides& ov) {
  ProblemSpec spec;
  try {
    spec = parse_spec(spec_file);
  } catch (const Error& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return 2;
  }

  fs::path dir(ov.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  try {
    BuiltProblem built = build_problem(spec, ov);
    {
      std::ofstream os(dir / "effective_config.txt");
      emit_spec(os, built.spec);
    }

    if (ov.dry_run) {
      // Validate and plot the initial guess topology only.
      const CellMask rho = material_state(*built.mesh, built.initial_design.masks);
      Continuum c = make_continuum(*built.mesh, rho,
                                   rigid_surfaces(built.initial_design.masks),
                                   built.problem.ports);
      write_topology_svg((dir / "topology.svg").string(), c, built.initial_design.masks);
      return 0;
    }

    std::ofstream conv(dir / "convergence.csv");
    if (!conv) throw IoError("cannot write convergence.csv");
    conv << "iter,feasible,objective,best\n";
    std::ofstream bdown(dir / "breakdown.csv");
    bdown << "iter,A_err,B_err,L_err,theta_err,penalty,total\n";

    const SearchConfig& cfg = built.search;
    std::deque<TraceRow> tail;
    auto on_iter = [&](const TraceRow& row, const EvalResult& e, const DesignVector& best,
                       Rng& rng) {
      conv << row.iteration << ',' << (row.feasible ? 1 : 0) << ','
           << fmt(row.objective) << ',' << fmt(row.best) << '\n';
      if (e.solved) {
        bdown << row.iteration << ',' << fmt(e.breakdown.A_err) << ','
              << fmt(e.breakdown.B_err) << ',' << fmt(e.breakdown.L_err) << ','
              << fmt(e.breakdown.theta_err) << ',' << fmt(e.breakdown.penalty) << ','
              << fmt(e.breakdown.total) << '\n';
      }
      tail.push_back(row);
      if (tail.size() > 10) tail.pop_front();
      if (cfg.checkpoint_every > 0 && row.iteration % cfg.checkpoint_every == 0) {
        std::ofstream ck(dir / "checkpoint.txt");
        write_design(ck, best);
        ck << "RNG " << rng.state() << '\n';
        ck << "ITER " << row.iteration << '\n';
        for (const TraceRow& t : tail)
          ck << "TRACE " << t.iteration << ' ' << (t.feasible ? 1 : 0) << ' '
             << fmt(t.objective) << ' ' << fmt(t.best) << '\n';
      }
    };

    SearchResult res = hill_climb(built.initial_design, cfg, built.problem, on_iter);
    conv.close();
    save_design((dir / "best_design.txt").string(), res.best);

    const Analysis a = analyze_design(res.best, built.problem, true);
    write_analysis_artifacts(dir, a, res.best, built.problem, ov);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "synthesis failed: " << e.what() << '\n';
    write_failed_marker(dir, e.what());
    return 1;
  }
}

int analyze_candidate(const std::string& spec_file, const std::string& design_file,
                      const RunOverrides& ov) {
  ProblemSpec spec;
  DesignVector design;
  try {
    spec = parse_spec(spec_file);
    design = load_design(design_file);
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }

  fs::path dir(ov.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  try {
    BuiltProblem built = build_problem(spec, ov);
    {
      std::ofstream os(dir / "effective_config.txt");
      emit_spec(os, built.spec);
    }
    const Analysis a = analyze_design(design, built.problem, true);

    std::ofstream os(dir / "summary.csv");
    os << "key,value\n";
    os << "feasible," << (a.eval.feasible ? 1 : 0) << '\n';
    os << "solved," << (a.eval.solved ? 1 : 0) << '\n';
    os << "reason," << a.eval.reason << '\n';
    os << "objective," << fmt(a.eval.objective) << '\n';
    os << "A_err," << fmt(a.eval.breakdown.A_err) << '\n';
    os << "B_err," << fmt(a.eval.breakdown.B_err) << '\n';
    os << "L_err," << fmt(a.eval.breakdown.L_err) << '\n';
    os << "theta_err," << fmt(a.eval.breakdown.theta_err) << '\n';
    os << "volume_penalty," << fmt(a.eval.breakdown.penalty) << '\n';
    os << "volume_fraction," << fmt(a.eval.volume_fraction) << '\n';
    double path_len = 0.0;
    for (std::size_t i = 0; i + 1 < a.eval.path.size(); ++i)
      path_len += norm(a.eval.path[i + 1] - a.eval.path[i]);
    os << "path_length," << fmt(path_len) << '\n';
    os << "zeta_l," << fmt(built.problem.specified_open_length > 0.0 && path_len >= 0.0
                               ? length_deviation(built.problem.specified_open_length, path_len)
                               : 0.0)
       << '\n';
    os << "mutual_contact," << (a.eval.had_mutual_contact ? 1 : 0) << '\n';
    os << "self_contact," << (a.eval.had_self_contact ? 1 : 0) << '\n';
    os << "solve_seconds," << fmt(a.eval.solve_seconds) << '\n';
    os.close();

    write_analysis_artifacts(dir, a, design, built.problem, ov);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "analysis failed: " << e.what() << '\n';
    write_failed_marker(dir, e.what());
    return 1;
  }
}

}  // namespace ccm
