// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace ccm {

using Mat2 = Eigen::Matrix2d;

/// Neo-Hookean material constants. E in MPa.
struct MaterialParams {
  double E = 2100.0;
  double nu = 0.33;
  double mu() const { return E / (2.0 * (1.0 + nu)); }
  double lambda() const { return 2.0 * mu() * nu / (1.0 - 2.0 * nu); }
};

enum class Kinematics { PlaneStrain, PlaneStress };

/// Pointwise constitutive evaluation at deformation gradient F (2x2).
/// For plane stress, F33 is solved so that sigma_33 = 0.
struct StressState {
  Mat2 sigma;      // Cauchy stress, in-plane block (MPa)
  double J2;       // det of the in-plane F
  double J3;       // full jacobian (J2 * F33)
  double F33;      // out-of-plane stretch (1 for plane strain)
};

/// sigma = mu/J (F F^T - I) + Lambda/J ln(J) I, restricted to 2-D.
/// Throws NonPositiveJacobian-style domain error via the cell-aware caller;
/// here signalled by returning J2 <= 0 in the state (callers must check).
StressState cauchy_stress(const Mat2& F, const MaterialParams& mat,
                          Kinematics kin = Kinematics::PlaneStrain);

/// Strain energy density at F (per undeformed volume).
double strain_energy(const Mat2& F, const MaterialParams& mat,
                     Kinematics kin = Kinematics::PlaneStrain);

/// Spatial tangent in 2-D Voigt order (xx, yy, xy) with engineering shear,
/// consistent with cauchy_stress. Plane stress is statically condensed.
Eigen::Matrix3d spatial_tangent(const Mat2& F, const MaterialParams& mat,
                                Kinematics kin = Kinematics::PlaneStrain);

}  // namespace ccm
