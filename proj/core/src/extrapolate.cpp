#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "casimir/energy.hpp"
#include "casimir/errors.hpp"

namespace casimir::energy {

namespace {

// Model in the shifted form E = c - A exp(-beta (L - L0)); A = alpha exp(-beta L0).
struct Model {
  double c, A, beta;
};

double predict(const Model& p, double dl) { return p.c - p.A * std::exp(-p.beta * dl); }

double ssr(const Model& p, const std::vector<LmaxSample>& s, double l0) {
  double acc = 0.0;
  for (const auto& v : s) {
    const double r = v.energy - predict(p, v.l_max - l0);
    acc += r * r;
  }
  return acc;
}

Eigen::MatrixXd jacobian(const Model& p, const std::vector<LmaxSample>& s, double l0) {
  Eigen::MatrixXd J(static_cast<Eigen::Index>(s.size()), 3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dl = s[i].l_max - l0;
    const double e = std::exp(-p.beta * dl);
    J(static_cast<Eigen::Index>(i), 0) = 1.0;
    J(static_cast<Eigen::Index>(i), 1) = -e;
    J(static_cast<Eigen::Index>(i), 2) = p.A * dl * e;
  }
  return J;
}

// Linear least squares for (c, A) at fixed beta.
Model linear_at(double beta, const std::vector<LmaxSample>& s, double l0) {
  Eigen::MatrixXd M(static_cast<Eigen::Index>(s.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    M(static_cast<Eigen::Index>(i), 0) = 1.0;
    M(static_cast<Eigen::Index>(i), 1) = -std::exp(-beta * (s[i].l_max - l0));
    y(static_cast<Eigen::Index>(i)) = s[i].energy;
  }
  const Eigen::VectorXd sol = M.colPivHouseholderQr().solve(y);
  return {sol(0), sol(1), beta};
}

Model initial_guess(const std::vector<LmaxSample>& s, double l0, bool& fallback) {
  const std::size_t n = s.size();
  const auto& a = s[n - 3];
  const auto& b = s[n - 2];
  const auto& c = s[n - 1];
  fallback = false;
  const int h1 = b.l_max - a.l_max;
  const int h2 = c.l_max - b.l_max;
  const double d1 = b.energy - a.energy;
  const double d2 = c.energy - b.energy;
  if (d1 != 0.0 && h1 == h2) {
    // Geometric ratio of the last three equally spaced rungs (Aitken).
    const double q = d2 / d1;
    if (q > 0.0 && q < 1.0) return linear_at(-std::log(q) / h2, s, l0);
  }
  fallback = true;
  double best_beta = 0.1;
  double best = HUGE_VAL;
  for (double beta = 0.005; beta < 3.0; beta *= 1.15) {
    const Model m = linear_at(beta, s, l0);
    const double v = ssr(m, s, l0);
    if (v < best) {
      best = v;
      best_beta = beta;
    }
  }
  return linear_at(best_beta, s, l0);
}

}  // namespace

Extrapolation extrapolate_lmax(const std::vector<LmaxSample>& samples) {
  if (samples.size() < 4) throw DomainError("l_max extrapolation needs at least 4 samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].l_max <= samples[i - 1].l_max) throw DomainError("l_max samples must be strictly increasing");
  }
  const double l0 = samples.front().l_max;
  bool fallback = false;
  Model p = initial_guess(samples, l0, fallback);

  double scale = 0.0;
  for (const auto& v : samples) scale = std::max(scale, std::abs(v.energy));
  if (scale == 0.0) scale = 1.0;

  // Levenberg-Marquardt with Marquardt's diagonal scaling.
  double lambda = 1e-3;
  double cur = ssr(p, samples, l0);
  bool stalled = false;
  for (int iter = 0; iter < 500 && !stalled; ++iter) {
    const Eigen::MatrixXd J = jacobian(p, samples, l0);
    Eigen::VectorXd r(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      r(static_cast<Eigen::Index>(i)) = samples[i].energy - predict(p, samples[i].l_max - l0);
    }
    const Eigen::Matrix3d JtJ = J.transpose() * J;
    const Eigen::Vector3d g = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::Matrix3d A = JtJ;
      for (int k = 0; k < 3; ++k) A(k, k) += lambda * std::max(JtJ(k, k), 1e-300);
      const Eigen::Vector3d step = A.ldlt().solve(g);
      const Model trial{p.c + step(0), p.A + step(1), p.beta + step(2)};
      const double v = ssr(trial, samples, l0);
      if (std::isfinite(v) && v <= cur) {
        const double rel = std::abs(step(0)) / scale + std::abs(step(2)) / std::max(std::abs(p.beta), 1e-12);
        p = trial;
        const double gain = cur - v;
        cur = v;
        lambda = std::max(lambda / 10.0, 1e-15);
        improved = true;
        stalled = rel < 1e-15 || gain <= 1e-30 * scale * scale;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) stalled = true;
  }

  Extrapolation out;
  out.e_inf = p.c;
  out.beta = p.beta;
  out.alpha = p.A * std::exp(p.beta * l0);
  const auto dof = static_cast<double>(samples.size()) - 3.0;
  const double s2 = dof > 0.0 ? cur / dof : 0.0;
  out.residual_rms = std::sqrt(cur / static_cast<double>(samples.size()));

  const Eigen::MatrixXd J = jacobian(p, samples, l0);
  const Eigen::Matrix3d JtJ = J.transpose() * J;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(JtJ);
  if (lu.isInvertible()) {
    const Eigen::Matrix3d cov = s2 * lu.inverse();
    out.e_inf_stderr = std::sqrt(std::max(0.0, cov(0, 0)));
    out.beta_stderr = std::sqrt(std::max(0.0, cov(2, 2)));
    const double e = std::exp(p.beta * l0);
    const double var_alpha = e * e * (cov(1, 1) + p.A * p.A * l0 * l0 * cov(2, 2) + 2.0 * p.A * l0 * cov(1, 2));
    out.alpha_stderr = std::sqrt(std::max(0.0, var_alpha));
  }

  std::ostringstream diag;
  if (!(out.beta > 0.0)) {
    out.warning = true;
    diag << "non-positive decay rate beta = " << out.beta << "; ";
  }
  if (fallback) {
    out.warning = true;
    diag << "successive differences are not geometric, seed from beta scan; ";
  }
  // Monotone convergence: all differences share a sign and shrink.
  for (std::size_t i = 2; i < samples.size(); ++i) {
    const double d1 = samples[i - 1].energy - samples[i - 2].energy;
    const double d2 = samples[i].energy - samples[i - 1].energy;
    if (d1 * d2 < 0.0 || std::abs(d2) > std::abs(d1)) {
      out.warning = true;
      diag << "non-monotone convergence between l_max = " << samples[i - 1].l_max << " and " << samples[i].l_max
           << "; ";
      break;
    }
  }
  if (!std::isfinite(out.e_inf)) {
    out.warning = true;
    diag << "non-finite extrapolated value; ";
  }
  out.diagnostics = diag.str();
  return out;
}

LadderResult energy_ladder(const Geometry& geom, const std::vector<int>& ladder, const QuadratureSpec& quad,
                           const Materials& mats) {
  LadderResult res;
  for (int l : ladder) {
    const auto e = casimir_energy_detailed(geom, l, quad, mats);
    res.samples.push_back({l, e.energy});
    res.quad_nodes = std::max(res.quad_nodes, e.nodes);
  }
  if (res.samples.size() >= 4 && geom.a > 0.0) {
    res.fit = extrapolate_lmax(res.samples);
    res.extrapolated = true;
    res.converged = !res.fit.warning;
  } else if (!res.samples.empty()) {
    res.fit.e_inf = res.samples.back().energy;
    res.converged = geom.a == 0.0;
  }
  return res;
}

LadderResult energy_auto(const Geometry& geom, double rel_tol, const QuadratureSpec& quad, int start, int step,
                         int cap, const Materials& mats) {
  if (start < 1 || step < 1) throw DomainError("l_max ladder needs positive start and step");
  LadderResult res;
  if (geom.a == 0.0) {
    res.samples.push_back({start, 0.0});
    res.converged = true;
    return res;
  }
  double previous = HUGE_VAL;
  for (int l = start; l <= cap; l += step) {
    const auto e = casimir_energy_detailed(geom, l, quad, mats);
    res.samples.push_back({l, e.energy});
    res.quad_nodes = std::max(res.quad_nodes, e.nodes);
    const std::size_t n = res.samples.size();
    // Raw convergence: the last rung barely moved the energy.
    if (n >= 2) {
      const double change = std::abs(res.samples[n - 1].energy - res.samples[n - 2].energy);
      if (change <= rel_tol * std::abs(res.samples[n - 1].energy)) {
        res.fit.e_inf = res.samples.back().energy;
        if (n >= 4) {
          res.fit = extrapolate_lmax(res.samples);
          res.extrapolated = true;
        }
        res.converged = true;
        return res;
      }
    }
    if (n >= 4) {
      res.fit = extrapolate_lmax(res.samples);
      res.extrapolated = true;
      if (std::abs(res.fit.e_inf - previous) <= rel_tol * std::abs(res.fit.e_inf) && !res.fit.warning) {
        res.converged = true;
        return res;
      }
      previous = res.fit.e_inf;
    }
  }
  if (!res.extrapolated) res.fit.e_inf = res.samples.back().energy;
  return res;
}

}  // namespace casimir::energy
