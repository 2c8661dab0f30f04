#include "casimir/analysis.hpp"

#include <cmath>
#include <initializer_list>
#include <utility>

#include <Eigen/Dense>

#include "casimir/errors.hpp"

namespace casimir::analysis {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::size_t find(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw DomainError("no fit parameter named " + name);
}

}  // namespace

double FitResult::value(const std::string& name) const { return values[find(names, name)]; }

double FitResult::error(const std::string& name) const { return errors[find(names, name)]; }

std::vector<CurveSample> central_difference(const std::vector<CurveSample>& s) {
  const std::size_t n = s.size();
  if (n < 3) throw DomainError("central differences need at least 3 points");
  const double h = s[1].x - s[0].x;
  if (!(h > 0.0)) throw DomainError("abscissae must be strictly increasing");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((s[i].x - s[i - 1].x) - h) > 1e-9 * h) throw DomainError("central differences need uniform spacing");
  }
  std::vector<CurveSample> out(n);
  auto combine = [&](std::size_t i, std::initializer_list<std::pair<std::size_t, double>> terms) {
    double v = 0.0, e2 = 0.0;
    for (const auto& [k, c] : terms) {
      v += c * s[k].value;
      e2 += c * c * s[k].error * s[k].error;
    }
    out[i] = {s[i].x, v / h, std::sqrt(e2) / h};
  };
  combine(0, {{0, -1.5}, {1, 2.0}, {2, -0.5}});
  for (std::size_t i = 1; i + 1 < n; ++i) combine(i, {{i - 1, -0.5}, {i + 1, 0.5}});
  combine(n - 1, {{n - 3, 0.5}, {n - 2, -2.0}, {n - 1, 1.5}});
  return out;
}

std::vector<ForceSample> force_from_ratio(const std::vector<CurveSample>& ratio,
                                          const std::function<pfa::FullPfa(double)>& fpfa, double gap_scale) {
  if (!(gap_scale > 0.0)) throw DomainError("gap scale R - r must be positive");
  const auto deriv = central_difference(ratio);
  std::vector<ForceSample> out;
  out.reserve(ratio.size());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    const pfa::FullPfa p = fpfa(ratio[i].x);
    const double lever = p.energy / (p.force * gap_scale);
    ForceSample f;
    f.x = ratio[i].x;
    f.ratio = ratio[i].value + lever * deriv[i].value;
    f.force = f.ratio * p.force;
    f.error = std::hypot(ratio[i].error, lever * deriv[i].error);
    f.one_sided = i == 0 || i + 1 == ratio.size();
    out.push_back(f);
  }
  return out;
}

std::vector<ForceSample> force_from_ratio(const std::vector<CurveSample>& ratio, double r_over_R, pfa::Basis basis) {
  if (!(r_over_R > 0.0 && r_over_R < 1.0)) throw DomainError("r/R must lie in (0, 1)");
  const double gap = 1.0 - r_over_R;
  auto fpfa = [&](double x) {
    pfa::PfaConfig cfg;
    cfg.y = -r_over_R;
    cfg.d_over_r = gap * (1.0 - x) / r_over_R;
    cfg.basis = basis;
    return pfa::full_pfa(cfg, 1.0);
  };
  return force_from_ratio(ratio, fpfa, gap);
}

FitResult linear_fit(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<double>& errors,
                     std::vector<std::string> names) {
  const Eigen::Index n = A.rows();
  const Eigen::Index p = A.cols();
  if (n < p) throw DomainError("fewer points than fit parameters");
  bool weighted = !errors.empty();
  for (double e : errors) weighted = weighted && e > 0.0;

  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  if (weighted) {
    for (Eigen::Index i = 0; i < n; ++i) w(i) = 1.0 / errors[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd Aw = w.asDiagonal() * A;
  const Eigen::VectorXd bw = w.asDiagonal() * b;

  // Column scaling keeps the normal matrix well conditioned.
  Eigen::VectorXd scale(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double nrm = Aw.col(j).norm();
    if (nrm == 0.0) throw DomainError("fit design matrix has an empty column");
    scale(j) = 1.0 / nrm;
  }
  Aw = Aw * scale.asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Aw);
  qr.setThreshold(1e-12);
  if (qr.rank() < p) throw DomainError("fit design matrix is rank deficient");
  const Eigen::VectorXd sol = qr.solve(bw);

  FitResult res;
  res.names = std::move(names);
  const Eigen::VectorXd params = scale.asDiagonal() * sol;
  const Eigen::VectorXd resid = b - A * params;
  const Eigen::VectorXd wres = w.asDiagonal() * resid;
  res.chi2 = wres.squaredNorm();
  res.dof = static_cast<int>(n - p);
  res.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) res.residuals.push_back(resid(i));

  const Eigen::MatrixXd normal = Aw.transpose() * Aw;
  Eigen::MatrixXd cov = scale.asDiagonal() * normal.inverse() * scale.asDiagonal();
  if (!weighted) cov *= res.dof > 0 ? res.chi2 / res.dof : 0.0;
  res.covariance = cov;
  for (Eigen::Index j = 0; j < p; ++j) {
    res.values.push_back(params(j));
    res.errors.push_back(std::sqrt(std::max(0.0, cov(j, j))));
  }
  return res;
}

namespace {

std::vector<double> errors_of(const std::vector<CurveSample>& pts) {
  std::vector<double> e;
  for (const auto& p : pts) e.push_back(p.error);
  return e;
}

}  // namespace

FitResult fit_energy_ansatz(const std::vector<CurveSample>& points) {
  if (points.size() < 3) throw DomainError("energy ansatz needs at least 3 points");
  Eigen::MatrixXd A(idx(points.size()), 2);
  Eigen::VectorXd b(idx(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double u = points[i].x;
    if (!(u > 0.0 && u < 0.25)) throw DomainError("energy ansatz needs 0 < d/r < 0.25");
    A(idx(i), 0) = u;
    A(idx(i), 1) = u * u * std::log(u);
    b(idx(i)) = points[i].value - 1.0;
  }
  return linear_fit(A, b, errors_of(points), {"theta1_bar", "theta2_bar"});
}

FitResult fit_force_ansatz(const std::vector<CurveSample>& points, double theta1_fpfa) {
  if (points.size() < 3) throw DomainError("force ansatz needs at least 3 points");
  Eigen::MatrixXd A(idx(points.size()), 2);
  Eigen::VectorXd b(idx(points.size()));
  const double tf = theta1_fpfa;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double u = points[i].x;
    if (!(u > 0.0)) throw DomainError("force ansatz needs d/r > 0");
    A(idx(i), 0) = 0.5 * u - 0.25 * tf * u * u;
    A(idx(i), 1) = -0.5 * u * u;
    b(idx(i)) = points[i].value - 1.0 + 0.25 * tf * tf * u * u;
  }
  return linear_fit(A, b, errors_of(points), {"theta1_bar", "theta2_bar"});
}

FitResult fit_theta1_curve(const std::vector<CurveSample>& points) {
  if (points.size() < 4) throw DomainError("theta1 curve fit needs at least 4 points");
  Eigen::MatrixXd A(idx(points.size()), 3);
  Eigen::VectorXd b(idx(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double y = points[i].x;
    if (!(y > -1.0)) throw DomainError("theta1 curve needs y > -1");
    A(idx(i), 0) = -y;
    A(idx(i), 1) = -y / (1.0 + y);
    A(idx(i), 2) = -1.0;
    b(idx(i)) = points[i].value;
  }
  return linear_fit(A, b, errors_of(points), {"k1", "k2", "k3"});
}

double theta1_curve(double k1, double k2, double k3, double y) {
  if (!(y > -1.0)) throw DomainError("theta1 curve needs y > -1");
  return -(k1 * y + k2 * y / (1.0 + y) + k3);
}

}  // namespace casimir::analysis
