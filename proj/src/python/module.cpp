// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ccmsynth/errors.hpp"
#include "ccmsynth/problem.hpp"

namespace py = pybind11;
using namespace ccm;

namespace {

std::vector<std::pair<double, double>> path_as_pairs(const std::vector<Vec2>& pts) {
  std::vector<std::pair<double, double>> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) out.emplace_back(p.x, p.y);
  return out;
}

PathPolyline polyline_from_pairs(const std::vector<std::pair<double, double>>& pts) {
  PathPolyline p;
  for (const auto& [x, y] : pts) p.points.push_back({x, y});
  return p;
}

}  // namespace

PYBIND11_MODULE(_ccmsynth, m) {
  m.doc() = "Synthesis of contact-aided compliant mechanisms";

  py::register_exception<ccm::Error>(m, "CcmError");

  py::class_<HexMesh>(m, "HexMesh")
      .def_readonly("nx", &HexMesh::nx)
      .def_readonly("ny", &HexMesh::ny)
      .def_readonly("circumradius", &HexMesh::circumradius)
      .def_property_readonly("cell_count", &HexMesh::cell_count)
      .def_property_readonly("node_count", &HexMesh::node_count)
      .def_property_readonly("domain_size",
                             [](const HexMesh& mesh) {
                               return std::make_pair(mesh.domain_size.x, mesh.domain_size.y);
                             })
      .def("nodes",
           [](const HexMesh& mesh) { return path_as_pairs(mesh.nodes); })
      .def("cells",
           [](const HexMesh& mesh) {
             std::vector<std::array<int, 6>> out(mesh.cells.begin(), mesh.cells.end());
             return out;
           })
      .def("cell_centroid", [](const HexMesh& mesh, int c) {
        const Vec2 p = mesh.cell_centroid(c);
        return std::make_pair(p.x, p.y);
      });

  m.def("generate_honeycomb", &generate_honeycomb, py::arg("nx"), py::arg("ny"),
        py::arg("cell_circumradius"));

  py::class_<Mask>(m, "Mask")
      .def(py::init([](double x, double y, double r, int s, double f) {
             return Mask{x, y, r, s, f};
           }),
           py::arg("x"), py::arg("y"), py::arg("r"), py::arg("s") = 0, py::arg("f") = 0.0)
      .def_readwrite("x", &Mask::x)
      .def_readwrite("y", &Mask::y)
      .def_readwrite("r", &Mask::r)
      .def_readwrite("s", &Mask::s)
      .def_readwrite("f", &Mask::f);

  py::class_<DesignVector>(m, "DesignVector")
      .def(py::init<>())
      .def_readwrite("masks", &DesignVector::masks)
      .def_readwrite("force_magnitude", &DesignVector::force_magnitude)
      .def("save", [](const DesignVector& v, const std::string& path) { save_design(path, v); })
      .def_static("load", &load_design);

  m.def("material_state",
        [](const HexMesh& mesh, const std::vector<Mask>& masks) {
          const CellMask rho = material_state(mesh, masks);
          return std::vector<int>(rho.begin(), rho.end());
        },
        py::arg("mesh"), py::arg("masks"));

  py::class_<PathDescriptor>(m, "PathDescriptor")
      .def_readonly("A", &PathDescriptor::A)
      .def_readonly("B", &PathDescriptor::B)
      .def_readonly("L", &PathDescriptor::L)
      .def_readonly("theta", &PathDescriptor::theta);

  m.def("path_descriptor",
        [](const std::vector<std::pair<double, double>>& pts, int n_harmonics) {
          return descriptor(close_path(polyline_from_pairs(pts)), n_harmonics);
        },
        py::arg("points"), py::arg("n_harmonics") = 50,
        "Close an open path clockwise and return its tangent-angle descriptor");

  py::class_<ObjectiveWeights>(m, "ObjectiveWeights")
      .def(py::init<>())
      .def_readwrite("w_a", &ObjectiveWeights::w_a)
      .def_readwrite("w_b", &ObjectiveWeights::w_b)
      .def_readwrite("w_L", &ObjectiveWeights::w_L)
      .def_readwrite("w_theta", &ObjectiveWeights::w_theta)
      .def_readwrite("lambda_v", &ObjectiveWeights::lambda_v)
      .def_readwrite("v_star", &ObjectiveWeights::v_star);

  m.def("path_objective",
        [](const std::vector<std::pair<double, double>>& actual,
           const std::vector<std::pair<double, double>>& specified, int n_harmonics,
           const ObjectiveWeights& w, double volume_fraction) {
          const PathDescriptor a = descriptor(close_path(polyline_from_pairs(actual)), n_harmonics);
          const PathDescriptor s = descriptor(close_path(polyline_from_pairs(specified)), n_harmonics);
          return objective(a, s, w, volume_fraction);
        },
        py::arg("actual"), py::arg("specified"), py::arg("n_harmonics") = 50,
        py::arg("weights") = ObjectiveWeights{}, py::arg("volume_fraction") = 0.0);

  m.def("length_deviation", &length_deviation, py::arg("L_specified"), py::arg("L_actual"));

  py::class_<ObjectiveBreakdown>(m, "ObjectiveBreakdown")
      .def_readonly("A_err", &ObjectiveBreakdown::A_err)
      .def_readonly("B_err", &ObjectiveBreakdown::B_err)
      .def_readonly("L_err", &ObjectiveBreakdown::L_err)
      .def_readonly("theta_err", &ObjectiveBreakdown::theta_err)
      .def_readonly("penalty", &ObjectiveBreakdown::penalty)
      .def_readonly("total", &ObjectiveBreakdown::total);

  py::class_<EvalResult>(m, "EvalResult")
      .def_readonly("objective", &EvalResult::objective)
      .def_readonly("feasible", &EvalResult::feasible)
      .def_readonly("solved", &EvalResult::solved)
      .def_readonly("reason", &EvalResult::reason)
      .def_readonly("breakdown", &EvalResult::breakdown)
      .def_readonly("volume_fraction", &EvalResult::volume_fraction)
      .def_readonly("had_active_contact", &EvalResult::had_active_contact)
      .def_readonly("had_self_contact", &EvalResult::had_self_contact)
      .def_readonly("had_mutual_contact", &EvalResult::had_mutual_contact)
      .def_property_readonly("path",
                             [](const EvalResult& r) { return path_as_pairs(r.path); });

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("iteration", &TraceRow::iteration)
      .def_readonly("feasible", &TraceRow::feasible)
      .def_readonly("objective", &TraceRow::objective)
      .def_readonly("best", &TraceRow::best)
      .def_readonly("accepted", &TraceRow::accepted);

  // Problem handle: owns the mesh and everything evaluate() needs.
  py::class_<BuiltProblem>(m, "Problem")
      .def_static("from_spec",
                  [](const std::string& spec_file) {
                    return build_problem(parse_spec(spec_file), RunOverrides{});
                  },
                  py::arg("spec_file"))
      .def_property_readonly("mesh",
                             [](const BuiltProblem& b) { return *b.mesh; })
      .def_property_readonly("initial_design",
                             [](const BuiltProblem& b) { return b.initial_design; })
      .def("evaluate",
           [](const BuiltProblem& b, const DesignVector& v) {
             return evaluate(v, b.problem);
           },
           py::arg("design"))
      .def("hill_climb",
           [](const BuiltProblem& b, const DesignVector& v0, int max_evals,
              std::uint64_t seed) {
             SearchConfig cfg = b.search;
             if (max_evals > 0) cfg.max_evals = max_evals;
             if (seed != 0) cfg.seed = seed;
             const SearchResult r = hill_climb(v0, cfg, b.problem);
             return std::make_tuple(r.best, r.best_objective, r.trace);
           },
           py::arg("initial_design"), py::arg("max_evals") = 0, py::arg("seed") = 0);

  m.def("run_synthesis",
        [](const std::string& spec_file, const std::string& out_dir) {
          RunOverrides ov;
          ov.out_dir = out_dir;
          return run_synthesis(spec_file, ov);
        },
        py::arg("spec_file"), py::arg("out_dir") = "out");

  m.attr("__version__") = "0.1.0";
}
