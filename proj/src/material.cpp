// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/material.hpp"

#include <cmath>

#include "ccmsynth/errors.hpp"

namespace ccm {

namespace {

// Out-of-plane stretch for plane stress: mu(F33^2 - 1) + Lambda ln(J2 F33) = 0.
double solve_f33(double J2, double mu, double lambda) {
  double f33 = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double g = mu * (f33 * f33 - 1.0) + lambda * std::log(J2 * f33);
    const double dg = 2.0 * mu * f33 + lambda / f33;
    const double step = g / dg;
    f33 -= step;
    if (f33 <= 0.0) f33 = 1e-6;
    if (std::abs(step) < 1e-14 * std::max(1.0, f33)) break;
  }
  return f33;
}

}  // namespace

StressState cauchy_stress(const Mat2& F, const MaterialParams& mat, Kinematics kin) {
  StressState s;
  s.J2 = F.determinant();
  if (!(s.J2 > 0.0)) {
    s.J3 = s.J2;
    s.F33 = 1.0;
    s.sigma.setZero();
    return s;
  }
  const double mu = mat.mu();
  const double lambda = mat.lambda();
  s.F33 = (kin == Kinematics::PlaneStrain) ? 1.0 : solve_f33(s.J2, mu, lambda);
  s.J3 = s.J2 * s.F33;
  const Mat2 b = F * F.transpose();
  s.sigma = (mu / s.J3) * (b - Mat2::Identity()) +
            (lambda / s.J3) * std::log(s.J3) * Mat2::Identity();
  return s;
}

double strain_energy(const Mat2& F, const MaterialParams& mat, Kinematics kin) {
  const double J2 = F.determinant();
  if (!(J2 > 0.0)) return std::numeric_limits<double>::infinity();
  const double mu = mat.mu();
  const double lambda = mat.lambda();
  const double f33 = (kin == Kinematics::PlaneStrain) ? 1.0 : solve_f33(J2, mu, lambda);
  const double J3 = J2 * f33;
  const double trb3 = (F * F.transpose()).trace() + f33 * f33;
  const double lnJ = std::log(J3);
  return 0.5 * mu * (trb3 - 3.0 - 2.0 * lnJ) + 0.5 * lambda * lnJ * lnJ;
}

Eigen::Matrix3d spatial_tangent(const Mat2& F, const MaterialParams& mat, Kinematics kin) {
  const StressState s = cauchy_stress(F, mat, kin);
  const double lnJ = std::log(s.J3);
  const double lp = mat.lambda() / s.J3;
  const double mp = (mat.mu() - mat.lambda() * lnJ) / s.J3;

  if (kin == Kinematics::PlaneStrain) {
    Eigen::Matrix3d D;
    D << lp + 2.0 * mp, lp, 0.0,
         lp, lp + 2.0 * mp, 0.0,
         0.0, 0.0, mp;
    return D;
  }
  // Plane stress: condense the 33 component of the isotropic tangent.
  Eigen::Matrix4d C;  // voigt (xx, yy, zz, xy)
  C.setZero();
  C(0, 0) = C(1, 1) = C(2, 2) = lp + 2.0 * mp;
  C(0, 1) = C(1, 0) = C(0, 2) = C(2, 0) = C(1, 2) = C(2, 1) = lp;
  C(3, 3) = mp;
  Eigen::Matrix3d D;
  const int map[3] = {0, 1, 3};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      D(a, b) = C(map[a], map[b]) - C(map[a], 2) * C(2, map[b]) / C(2, 2);
  return D;
}

}  // namespace ccm
