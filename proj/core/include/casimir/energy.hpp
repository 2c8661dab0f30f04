#pragma once

#include <string>
#include <vector>

#include "casimir/scattering.hpp"
#include "casimir/translation.hpp"

namespace casimir::energy {

/// Inner sphere of radius r inside a cavity of radius R, centers displaced by a.
struct Geometry {
  double r = 0.5;
  double R = 1.0;
  double a = 0.0;

  /// Geometry with R = 1 from the ratio r/R and x = a/(R - r).
  static Geometry from_ratio(double r_over_R, double x);

  double x() const { return a / (R - r); }
  double gap() const { return R - r - a; }
  double xi() const { return a / R; }
  /// Throws DomainError unless 0 < r < R and 0 <= a < R - r.
  void validate() const;
};

struct Materials {
  scattering::MaterialResponse inner = scattering::MaterialResponse::perfect_conductor();
  scattering::MaterialResponse cavity = scattering::MaterialResponse::perfect_conductor();
  scattering::MaterialResponse medium = scattering::MaterialResponse::vacuum();
};

/// Gauss-Legendre quadrature in t on (0,1) with kappa R = s t / (1 - t).
/// mapping <= 0 selects s = R / (2 d). The node count doubles from `nodes`
/// until successive estimates agree to rel_tol (plus abs_tol), or max_nodes is hit.
struct QuadratureSpec {
  int nodes = 24;
  double mapping = 0.0;
  double rel_tol = 1e-8;
  double abs_tol = 1e-15;
  int max_nodes = 1024;
};

/// N_m = T_e V_ei T_i V_ie for one azimuthal block, as plain complex numbers.
/// Meant for inspection and testing; the energy path never forms N directly.
translation::BlockMatrix round_trip_block(int m, double kappa_R, const Geometry& geom, int l_max,
                                          const Materials& mats = {});

/// sum_m ln det(I - N_m) - sum_{l,pol,m} ln(1 - T_e T_i) at one frequency.
/// Negative for perfect conductors; exactly zero for a = 0.
double logdet_integrand(double kappa_R, const Geometry& geom, int l_max, const Materials& mats = {});

/// Contribution of the single block m (not doubled for -m).
double logdet_block(int m, double kappa_R, const Geometry& geom, int l_max, const Materials& mats = {});

/// Integrand values at many frequencies; block tables are built once per m.
std::vector<double> logdet_integrand_batch(const std::vector<double>& kappa_R, const Geometry& geom, int l_max,
                                           const Materials& mats = {});

struct EnergyResult {
  double energy = 0.0;          ///< units of hbar c / R
  double coarse_estimate = 0.0;  ///< estimate with half the final node count
  int nodes = 0;
  double mapping = 0.0;
};

EnergyResult casimir_energy_detailed(const Geometry& geom, int l_max, const QuadratureSpec& quad = {},
                                     const Materials& mats = {});

/// Casimir energy relative to the concentric configuration, in units of hbar c / R.
double casimir_energy(const Geometry& geom, int l_max, const QuadratureSpec& quad = {},
                      const Materials& mats = {});

struct LmaxSample {
  int l_max = 0;
  double energy = 0.0;
};

/// Fit of E(l_max) = E_inf - alpha exp(-beta l_max).
struct Extrapolation {
  double e_inf = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double e_inf_stderr = 0.0;
  double alpha_stderr = 0.0;
  double beta_stderr = 0.0;
  double residual_rms = 0.0;
  bool warning = false;
  std::string diagnostics;
};

/// Levenberg-Marquardt fit seeded from an Aitken estimate. Needs >= 4 samples with
/// strictly increasing l_max. Emits a (non-fatal) warning flag when beta <= 0 or the
/// residuals show structure the model cannot absorb.
Extrapolation extrapolate_lmax(const std::vector<LmaxSample>& samples);

struct LadderResult {
  std::vector<LmaxSample> samples;
  Extrapolation fit;
  bool extrapolated = false;
  bool converged = false;
  int quad_nodes = 0;
};

/// Energies along an explicit l_max ladder followed by the exponential fit
/// (when the ladder has at least 4 rungs).
LadderResult energy_ladder(const Geometry& geom, const std::vector<int>& ladder, const QuadratureSpec& quad = {},
                           const Materials& mats = {});

/// Automatic policy: rungs start, start+step, ... until the extrapolated value
/// moves by less than rel_tol between successive fits, capped at l_max = cap.
LadderResult energy_auto(const Geometry& geom, double rel_tol, const QuadratureSpec& quad = {}, int start = 10,
                         int step = 5, int cap = 80, const Materials& mats = {});

}  // namespace casimir::energy
