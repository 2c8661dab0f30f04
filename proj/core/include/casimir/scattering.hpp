#pragma once

#include <functional>
#include <vector>

namespace casimir::scattering {

enum class Polarization { E, M };

/// Electromagnetic response on the imaginary-frequency axis.
///
/// epsilon and mu are called with the same dimensionless frequency argument
/// that is passed to t_inner / t_cavity (kappa times the object radius).
/// Only frequency-independent models are built in; any positive function works.
struct MaterialResponse {
  enum class Kind { PerfectConductor, Dielectric };

  Kind kind = Kind::PerfectConductor;
  std::function<double(double)> epsilon;
  std::function<double(double)> mu;

  static MaterialResponse perfect_conductor();
  static MaterialResponse vacuum();
  static MaterialResponse dielectric(double eps, double mu = 1.0);

  bool is_perfect_conductor() const { return kind == Kind::PerfectConductor; }
  double eps_at(double arg) const;
  double mu_at(double arg) const;
  double refractive_index(double arg) const;
};

/// Static multipole polarizabilities; index l, entry 0 unused.
struct PolarizabilitySet {
  std::vector<double> alpha_E;
  std::vector<double> alpha_M;

  int l_cut() const { return alpha_E.empty() ? 0 : static_cast<int>(alpha_E.size()) - 1; }
  double alpha(int l, Polarization pol) const;
};

/// Diagonal element of the inner-sphere T-matrix (scattering outside the sphere).
/// Throws DomainError for l < 1 or kappa_r <= 0.
double t_inner(int l, Polarization pol, double kappa_r, const MaterialResponse& mat,
               const MaterialResponse& medium = MaterialResponse::vacuum());

/// Diagonal element of the cavity T-matrix for scattering inside the cavity.
double t_cavity(int l, Polarization pol, double kappa_R, const MaterialResponse& mat,
                const MaterialResponse& medium = MaterialResponse::vacuum());

/// Low-frequency multipole form kappa^(2l+1) (-1)^(l-1) (l+1) alpha_l / (l (2l+1)!! (2l-1)!!).
double t_multipole(int l, Polarization pol, double kappa, const PolarizabilitySet& pols);

/// alpha_E[l] = r^(2l+1), alpha_M[l] = -l r^(2l+1) / (l+1) for l = 1..l_cut.
PolarizabilitySet pec_polarizabilities(double r, int l_cut);

/// All diagonal T elements for l = 1..l_max in log-magnitude/sign form.
/// Index l; entry 0 is unused. A zero element has log_abs = -inf and sign 0.
struct TDiagonal {
  std::vector<double> log_abs_E, log_abs_M;
  std::vector<int> sign_E, sign_M;

  double log_abs(int l, Polarization pol) const { return pol == Polarization::E ? log_abs_E[l] : log_abs_M[l]; }
  int sign(int l, Polarization pol) const { return pol == Polarization::E ? sign_E[l] : sign_M[l]; }
  double value(int l, Polarization pol) const;
};

TDiagonal inner_diagonal(int l_max, double kappa_r, const MaterialResponse& mat,
                         const MaterialResponse& medium = MaterialResponse::vacuum());
TDiagonal cavity_diagonal(int l_max, double kappa_R, const MaterialResponse& mat,
                          const MaterialResponse& medium = MaterialResponse::vacuum());

}  // namespace casimir::scattering
