#pragma once

#include <Eigen/Core>

#include "casimir/energy.hpp"
#include "casimir/scattering.hpp"

namespace casimir::cp {

/// Cavity response ratios. M: k_l(x)/i_l(x) (positive).
/// E: (k_l + x k_l')/(i_l + x i_l') (negative, since x k_l is decreasing).
double zeta(int l, scattering::Polarization pol, double x);

/// Electric and magnetic dipole polarizability tensors, z along the displacement.
struct DipoleTensors {
  Eigen::Matrix3d alpha_E = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d alpha_M = Eigen::Matrix3d::Zero();
};

/// Dimensionless coefficient functions at xi = a/R.
struct CpCoefficients {
  double xi = 0.0;
  double f_E = 0.0, f_M = 0.0;
  double f0_E = 0.0, f0_M = 0.0;  ///< f at xi = 0, from the same quadrature
  double g_E = 0.0, g_M = 0.0;
  double h1_E = 0.0, h1_M = 0.0;
  double h2_E = 0.0, h2_M = 0.0;

  int l_cut = 0;       ///< cap on the multipole sum
  int l_used = 0;      ///< highest l any node needed
  int nodes = 0;       ///< final Gauss-Legendre node count
  double mapping = 0.0;
  double tail = 0.0;   ///< integrated truncation estimate of the l-sums
};

/// Quadrature defaults for the coefficient integrals; the mapping scale
/// (mapping <= 0) is 1 / (2 (1 - xi)), the decay length of the integrands.
energy::QuadratureSpec default_quadrature();

/// f, g, h1, h2 for both polarizations. The l-sums stop once further terms are
/// negligible at every node; if l_cut is reached first and the estimated tail
/// exceeds 1e-10 of the coefficient scale, ConvergenceError is thrown (raise l_cut).
/// Throws DomainError for xi outside [0, 1) or l_cut outside [2, 198].
CpCoefficients cp_coefficients(double xi, int l_cut = 150, const energy::QuadratureSpec& quad = default_quadrature());

/// Leading orientation-dependent energy in hbar c units:
/// (1 / 3 pi R^4) {[f(xi) - f(0)] Tr alpha + g(xi) (2 a_zz - a_xx - a_yy)} summed over E and M.
double cp_energy_tensor(const CpCoefficients& c, const DipoleTensors& t, double R);
double cp_energy_tensor(const DipoleTensors& t, double xi, double R);

/// Energy of a spherically symmetric object through O(r^3/R^3) (order 3)
/// or O(r^5/R^5) (order 5): (1 / 2 pi R) sum_P [h1 alpha_1 / R^3 + h2 alpha_2 / R^5].
double cp_energy_spherical(const CpCoefficients& c, const scattering::PolarizabilitySet& pols, double R,
                           int order = 5);
double cp_energy_spherical(const scattering::PolarizabilitySet& pols, double xi, double R, int order = 5);

}  // namespace casimir::cp
