#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "casimir/pfa.hpp"

namespace casimir::analysis {

/// One point of a sampled curve. `error` is a one-sigma uncertainty (0 if unknown).
struct CurveSample {
  double x = 0.0;
  double value = 0.0;
  double error = 0.0;
};

/// Linear least-squares estimates with standard errors.
struct FitResult {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> errors;
  Eigen::MatrixXd covariance;
  std::vector<double> residuals;
  double residual_rms = 0.0;
  double chi2 = 0.0;  ///< weighted when every point carries an error, else plain
  int dof = 0;

  double value(const std::string& name) const;
  double error(const std::string& name) const;
};

/// Centered differences in the interior, second-order one-sided at both ends.
/// Errors are propagated from the sample errors. Throws DomainError for fewer
/// than 3 points or spacing that is not uniform to 1e-9 relative.
std::vector<CurveSample> central_difference(const std::vector<CurveSample>& series);

struct ForceSample {
  double x = 0.0;
  double ratio = 0.0;   ///< F / F_fPFA
  double force = 0.0;   ///< F, units hbar c / R^2
  double error = 0.0;   ///< propagated uncertainty of the ratio
  bool one_sided = false;
};

/// Force from the energy ratio R(x) = E / E_fPFA:
///   F / F_fPFA = R + (E_fPFA / F_fPFA) dR/dx / (R - r),
/// which is F = -dE/dd with d = (R - r)(1 - x). `fpfa(x)` returns the full-PFA
/// energy and force at that x in hbar c / R and hbar c / R^2.
std::vector<ForceSample> force_from_ratio(const std::vector<CurveSample>& ratio,
                                          const std::function<pfa::FullPfa(double)>& fpfa, double gap_scale);

/// Interior sphere of radius r_over_R in a unit cavity, full PFA in the given basis.
std::vector<ForceSample> force_from_ratio(const std::vector<CurveSample>& ratio, double r_over_R,
                                          pfa::Basis basis = pfa::Basis::r_based);

/// E / E_fPFA = 1 + theta1_bar u + theta2_bar u^2 ln u with u = d/r (sample x).
/// Needs >= 3 points, all with 0 < u < 0.25.
FitResult fit_energy_ansatz(const std::vector<CurveSample>& points);

/// F / F_fPFA = 1 + theta1_bar u/2 - theta2_bar u^2/2 - theta1_fpfa (theta1_bar + theta1_fpfa) u^2/4.
/// Linear in (theta1_bar, theta2_bar) once the known theta1_fpfa^2 term is moved left.
FitResult fit_force_ansatz(const std::vector<CurveSample>& points, double theta1_fpfa);

/// theta1(y) = -(k1 y + k2 y/(1+y) + k3) over samples with x = y. Needs >= 4 points.
FitResult fit_theta1_curve(const std::vector<CurveSample>& points);

/// The curve above at one y.
double theta1_curve(double k1, double k2, double k3, double y);

/// Weighted linear least squares A p = b (weights 1/error^2 when every error is
/// positive). Throws DomainError on rank deficiency. Exposed for reuse and tests.
FitResult linear_fit(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<double>& errors,
                     std::vector<std::string> names);

}  // namespace casimir::analysis
