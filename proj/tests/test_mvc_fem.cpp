// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ccmsynth/errors.hpp"
#include "ccmsynth/fem.hpp"
#include "ccmsynth/mvc.hpp"
#include "ccmsynth/quadrature.hpp"

using namespace ccm;

namespace {

std::mt19937_64 g_rng(2024);
double uni(double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * ((g_rng() >> 11) * 0x1.0p-53);
}

// Random hexagon: regular with jittered vertices; larger jitter makes many
// of them concave.
std::vector<Vec2> random_hexagon(double jitter) {
  std::vector<Vec2> poly(6);
  for (int k = 0; k < 6; ++k) {
    const double a = M_PI / 3.0 * k;
    poly[k] = {std::cos(a) + uni(-jitter, jitter), std::sin(a) + uni(-jitter, jitter)};
  }
  if (polygon_area(poly.data(), 6) < 0.2) return random_hexagon(jitter);  // avoid near-degenerate
  return poly;
}

Vec2 random_interior_point(const std::vector<Vec2>& poly) {
  double lo_x = poly[0].x, hi_x = lo_x, lo_y = poly[0].y, hi_y = lo_y;
  for (const Vec2& p : poly) {
    lo_x = std::min(lo_x, p.x); hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y); hi_y = std::max(hi_y, p.y);
  }
  for (;;) {
    const Vec2 p{uni(lo_x, hi_x), uni(lo_y, hi_y)};
    if (!point_in_polygon(p, poly.data(), 6)) continue;
    // keep away from edges so gradients stay benign for the FD check
    double min_edge_dist = 1e30;
    for (int k = 0; k < 6; ++k) {
      const Vec2 a = poly[k];
      const Vec2 b = poly[(k + 1) % 6];
      const double t = project_on_segment(p, a, b);
      min_edge_dist = std::min(min_edge_dist, norm(p - (a + (b - a) * t)));
    }
    if (min_edge_dist > 1e-3) return p;
  }
}

Attachments strip_ports(const HexMesh& mesh) {
  Attachments ports;
  double max_x = -1e30;
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (mesh.nodes[n].x < 0.6 * mesh.circumradius) ports.fixed_nodes.push_back(n);
    if (mesh.nodes[n].x > max_x) {
      max_x = mesh.nodes[n].x;
      ports.output_node = n;
    }
  }
  ports.input_node = ports.output_node;
  ports.input_direction = {0.0, -1.0};
  return ports;
}

Continuum full_strip(const HexMesh& mesh) {
  return make_continuum(mesh, CellMask(mesh.cells.size(), 1), {}, strip_ports(mesh));
}

}  // namespace

TEST_CASE("mvc: Kronecker property exact at vertices") {
  const auto poly = random_hexagon(0.25);
  std::vector<double> N;
  std::vector<Vec2> dN;
  for (int k = 0; k < 6; ++k) {
    mvc_shape(poly, poly[k], N, dN);
    for (int i = 0; i < 6; ++i) CHECK(N[i] == (i == k ? 1.0 : 0.0));
  }
}

TEST_CASE("mvc: regular hexagon centroid gives 1/6 everywhere") {
  std::vector<Vec2> poly(6);
  for (int k = 0; k < 6; ++k) {
    const double a = M_PI / 3.0 * k;
    poly[k] = {2.0 * std::cos(a) + 5.0, 2.0 * std::sin(a) - 3.0};
  }
  std::vector<double> N;
  std::vector<Vec2> dN;
  mvc_shape(poly, {5.0, -3.0}, N, dN);
  for (int i = 0; i < 6; ++i) CHECK(N[i] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("mvc: point on an edge uses the linear interpolation limit") {
  const std::vector<Vec2> poly = {{0, 0}, {2, 0}, {3, 2}, {1.5, 3.2}, {-0.5, 2.5}, {-1, 1}};
  std::vector<double> N;
  std::vector<Vec2> dN;
  mvc_shape(poly, {0.5, 0.0}, N, dN);  // on edge 0-1 at t = 0.25
  CHECK(N[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(N[1] == doctest::Approx(0.25).epsilon(1e-12));
  for (int i = 2; i < 6; ++i) CHECK(N[i] == doctest::Approx(0.0));
}

TEST_CASE("mvc: partition of unity, linear precision, convex nonnegativity") {
  for (int trial = 0; trial < 50; ++trial) {
    const auto poly = random_hexagon(trial < 25 ? 0.05 : 0.3);
    const Vec2 p = random_interior_point(poly);
    std::vector<double> N;
    std::vector<Vec2> dN;
    mvc_shape(poly, p, N, dN);
    double sum = 0.0;
    Vec2 x{};
    Vec2 gsum{};
    for (int i = 0; i < 6; ++i) {
      sum += N[i];
      x += poly[i] * N[i];
      gsum += dN[i];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(norm(x - p) <= 1e-10 * 2.0);
    CHECK(norm(gsum) <= 1e-10);  // gradient of the constant 1
  }
  // convex polygon: all values nonnegative
  std::vector<Vec2> convex(6);
  for (int k = 0; k < 6; ++k) {
    const double a = M_PI / 3.0 * k;
    convex[k] = {std::cos(a), std::sin(a)};
  }
  for (int t = 0; t < 200; ++t) {
    const Vec2 p = random_interior_point(convex);
    std::vector<double> N;
    std::vector<Vec2> dN;
    mvc_shape(convex, p, N, dN);
    for (double v : N) CHECK(v >= -1e-14);
  }
}

TEST_CASE("mvc: gradients match central finite differences") {
  for (int trial = 0; trial < 25; ++trial) {
    const auto poly = random_hexagon(0.3);
    const Vec2 p = random_interior_point(poly);
    std::vector<double> N, Nxp, Nxm, Nyp, Nym;
    std::vector<Vec2> dN, scratch;
    mvc_shape(poly, p, N, dN);
    const double h = 1e-6 * 2.0;  // 1e-6 * diameter
    mvc_values(poly, {p.x + h, p.y}, Nxp);
    mvc_values(poly, {p.x - h, p.y}, Nxm);
    mvc_values(poly, {p.x, p.y + h}, Nyp);
    mvc_values(poly, {p.x, p.y - h}, Nym);
    for (int i = 0; i < 6; ++i) {
      const Vec2 fd{(Nxp[i] - Nxm[i]) / (2 * h), (Nyp[i] - Nym[i]) / (2 * h)};
      const double scale = std::max(1.0, norm(dN[i]));
      CHECK(norm(fd - dN[i]) / scale <= 1e-5);
    }
  }
}

TEST_CASE("mvc: degenerate polygons are rejected") {
  std::vector<double> N;
  std::vector<Vec2> dN;
  CHECK_THROWS_AS(mvc_shape(std::vector<Vec2>{{0, 0}, {1, 0}}, {0.5, 0.1}, N, dN),
                  DegeneratePolygon);
  CHECK_THROWS_AS(
      mvc_shape(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 0}, {2, 1}}, {0.5, 0.1}, N, dN),
      DegeneratePolygon);
  CHECK_THROWS_AS(
      mvc_shape(std::vector<Vec2>{{0, 0}, {1, 0}, {2, 0}}, {0.5, 0.0}, N, dN),
      DegeneratePolygon);
}

TEST_CASE("triangle rules: weights sum to the (signed) area") {
  for (int n : {1, 3, 7, 25}) {
    const TriangleRule& rule = triangle_rule(n);
    CHECK(rule.size() == n);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  }
  // fan over a concave polygon reproduces the polygon area
  const std::vector<Vec2> poly = {{0, 0}, {4, 0}, {4, 3}, {2, 1.2}, {0, 3}, {-1, 1}};
  const auto q = polygon_fan_quadrature(poly.data(), 6, triangle_rule(7));
  double area = 0.0;
  for (double w : q.weights) area += w;
  CHECK(area == doctest::Approx(polygon_area(poly.data(), 6)).epsilon(1e-12));
  CHECK_THROWS_AS(triangle_rule(4), InvalidArgument);
}

TEST_CASE("constitutive law") {
  const MaterialParams mat;  // E = 2100, nu = 0.33
  CHECK(mat.mu() == doctest::Approx(2100.0 / (2.0 * 1.33)).epsilon(1e-15));
  CHECK(mat.lambda() == doctest::Approx(2.0 * mat.mu() * 0.33 / 0.34).epsilon(1e-15));

  // stress-free reference
  const StressState s0 = cauchy_stress(Mat2::Identity(), mat);
  CHECK(s0.sigma.norm() == 0.0);

  // simple shear, J = 1 exactly: sigma_12 = mu*gamma to first order
  const double gamma = 1e-4;
  Mat2 F;
  F << 1.0, gamma, 0.0, 1.0;
  const StressState ss = cauchy_stress(F, mat);
  CHECK(ss.J2 == 1.0);
  CHECK(ss.sigma(0, 1) == doctest::Approx(mat.mu() * gamma).epsilon(1e-6));
  CHECK(ss.sigma(1, 0) == doctest::Approx(mat.mu() * gamma).epsilon(1e-6));

  // plane stress: out-of-plane stress vanishes
  Mat2 Fs;
  Fs << 1.1, 0.02, -0.03, 0.95;
  const StressState ps = cauchy_stress(Fs, mat, Kinematics::PlaneStress);
  const double s33 = (mat.mu() * (ps.F33 * ps.F33 - 1.0) +
                      mat.lambda() * std::log(ps.J3)) / ps.J3;
  CHECK(std::abs(s33) <= 1e-10 * mat.E);
}

TEST_CASE("assembly: stress-free and objectivity") {
  const HexMesh mesh = generate_honeycomb(4, 2, 1.0);
  const Continuum cont = full_strip(mesh);
  const MaterialParams mat;
  const QuadratureSpec quad{7};

  SolverOptions opts;
  FemModel model(cont, mat, quad, opts);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(model.n_dofs());
  Eigen::VectorXd f;
  std::vector<Eigen::Triplet<double>> trips;
  model.assemble(u, f, &trips);
  CHECK(f.norm() == 0.0);

  double knorm = 0.0;
  for (const auto& t : trips) knorm += t.value() * t.value();
  knorm = std::sqrt(knorm);

  // rigid translation
  for (int i = 0; i < model.n_dofs(); i += 2) {
    u[i] = 0.37;
    u[i + 1] = -0.21;
  }
  model.assemble(u, f, nullptr);
  CHECK(f.norm() <= 1e-10 * knorm);
}

TEST_CASE("assembly: tangent matches finite differences of f_int") {
  const HexMesh mesh = generate_honeycomb(5, 2, 1.0);
  const Continuum cont = full_strip(mesh);
  const MaterialParams mat;
  const QuadratureSpec quad{7};
  SolverOptions opts;
  for (Kinematics kin : {Kinematics::PlaneStrain, Kinematics::PlaneStress}) {
    opts.kinematics = kin;
    FemModel model(cont, mat, quad, opts);
    const int n = model.n_dofs();
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = uni(-0.02, 0.02);

    Eigen::VectorXd f;
    std::vector<Eigen::Triplet<double>> trips;
    model.assemble(u, f, &trips);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (const auto& t : trips) K(t.row(), t.col()) += t.value();

    const double h = 1e-7;
    Eigen::MatrixXd Kfd(n, n);
    Eigen::VectorXd fp, fm;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd up = u, um = u;
      up[j] += h;
      um[j] -= h;
      model.assemble(up, fp, nullptr);
      model.assemble(um, fm, nullptr);
      Kfd.col(j) = (fp - fm) / (2.0 * h);
    }
    // plane-stress condensation is first-order in the out-of-plane coupling
    const double tol = (kin == Kinematics::PlaneStrain) ? 1e-5 : 2e-2;
    CHECK((K - Kfd).norm() / Kfd.norm() <= tol);
  }
}

TEST_CASE("assembly: f_int is the gradient of the stored energy") {
  const HexMesh mesh = generate_honeycomb(3, 2, 1.0);
  const Continuum cont = full_strip(mesh);
  const MaterialParams mat;
  SolverOptions opts;
  FemModel model(cont, mat, QuadratureSpec{7}, opts);
  const int n = model.n_dofs();
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = uni(-0.02, 0.02);
  Eigen::VectorXd f;
  model.assemble(u, f, nullptr);
  const double h = 1e-6;
  for (int j = 0; j < n; j += 3) {
    Eigen::VectorXd up = u, um = u;
    up[j] += h;
    um[j] -= h;
    const double fd = (model.energy(up) - model.energy(um)) / (2.0 * h);
    CHECK(fd == doctest::Approx(f[j]).epsilon(1e-5).scale(std::max(1.0, f.norm())));
  }
}

TEST_CASE("solve: zero load converges immediately to zero displacement") {
  const HexMesh mesh = generate_honeycomb(3, 2, 1.0);
  const Continuum cont = full_strip(mesh);
  LoadSpec load{cont.ports.input_node, {0.0, -1.0}, 0.0};
  SolverOptions opts;
  opts.n_steps = 3;
  opts.length_scale = mesh.characteristic_length();
  const SolveState ss = solve(cont, MaterialParams{}, QuadratureSpec{7}, load, opts);
  CHECK(ss.converged);
  CHECK(ss.u.norm() == 0.0);
  CHECK(ss.output_path.size() == 4);
}

TEST_CASE("solve: tiny load matches the linear-elastic oracle") {
  const HexMesh mesh = generate_honeycomb(1, 1, 1.0);
  Attachments ports;
  // fix the three left vertices, load the +x vertex downward
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (mesh.nodes[n].x < 0.6) ports.fixed_nodes.push_back(n);
  }
  int tip = 0;
  for (int n = 0; n < mesh.node_count(); ++n)
    if (mesh.nodes[n].x > mesh.nodes[tip].x) tip = n;
  ports.input_node = ports.output_node = tip;
  REQUIRE(ports.fixed_nodes.size() >= 2);

  const Continuum cont = make_continuum(mesh, CellMask(1, 1), {}, ports);
  const double F = 1e-4;
  LoadSpec load{tip, {0.0, -1.0}, F};
  SolverOptions opts;
  opts.n_steps = 1;
  opts.length_scale = 1.0;

  const MaterialParams mat;
  const QuadratureSpec quad{25};
  const SolveState ss = solve(cont, mat, quad, load, opts);
  REQUIRE(ss.converged);

  // independent linear solve at u = 0
  FemModel model(cont, mat, quad, opts);
  const int n = model.n_dofs();
  Eigen::VectorXd f0;
  std::vector<Eigen::Triplet<double>> trips;
  model.assemble(Eigen::VectorXd::Zero(n), f0, &trips);
  std::vector<Eigen::Triplet<double>> reduced;
  for (const auto& t : trips)
    if (!model.is_fixed(t.row()) && !model.is_fixed(t.col())) reduced.push_back(t);
  for (int i = 0; i < n; ++i)
    if (model.is_fixed(i)) reduced.emplace_back(i, i, 1.0);
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(reduced.begin(), reduced.end());
  const Eigen::VectorXd fe = model.external_force(load, 1.0);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(K);
  const Eigen::VectorXd ulin = lu.solve(fe);

  const double tip_nr = std::hypot(ss.u[model.dof_of_node(tip, 0)], ss.u[model.dof_of_node(tip, 1)]);
  const double tip_lin = std::hypot(ulin[model.dof_of_node(tip, 0)], ulin[model.dof_of_node(tip, 1)]);
  CHECK(tip_nr == doctest::Approx(tip_lin).epsilon(0.01));
}

TEST_CASE("solve: final state insensitive to load-step count without contact") {
  const HexMesh mesh = generate_honeycomb(8, 1, 1.0);
  const Continuum cont = full_strip(mesh);
  LoadSpec load{cont.ports.input_node, {0.0, -1.0}, 18.0};
  SolverOptions opts;
  opts.length_scale = mesh.characteristic_length();

  opts.n_steps = 10;
  const SolveState a = solve(cont, MaterialParams{}, QuadratureSpec{7}, load, opts);
  opts.n_steps = 20;
  const SolveState b = solve(cont, MaterialParams{}, QuadratureSpec{7}, load, opts);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  const Vec2 tip_a = a.output_path.back();
  const Vec2 tip_b = b.output_path.back();
  const Vec2 tip0 = a.output_path.front();
  const double defl = norm(tip_a - tip0);
  CHECK(defl > 0.5);  // genuinely large deflection
  CHECK(norm(tip_a - tip_b) <= 0.005 * defl);
}
