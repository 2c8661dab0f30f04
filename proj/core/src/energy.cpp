#include "casimir/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/specfun.hpp"

namespace casimir::energy {

using scattering::Polarization;
using scattering::TDiagonal;

namespace {

// Beyond this value of 2 kappa d every round trip is suppressed below e^-230.
constexpr double kDecayCutoff = 230.0;

constexpr int kE = 0;
constexpr int kM = 1;

Polarization pol_of(int p) { return p == kE ? Polarization::E : Polarization::M; }

// Everything about one frequency that does not depend on m.
struct Node {
  double kappa_R = 0.0;
  bool vanishes = false;
  double t = 0.0;  // translation argument n_M kappa a
  std::vector<std::vector<double>> ratio;  // ratio[d][j] = i_{d+2j}(t) / i_d(t)
  Eigen::MatrixXd pre[2][2];               // pre[p'][p](l'-1, l-1)
  bool plain_metric = true;                // both sign metrics are the identity
  std::vector<double> metric_cavity[2];    // sign(T_e) * sigma_3, index l
  std::vector<double> metric_inner[2];     // sigma_3 * sign(T_i), index l
  std::vector<double> concentric[2];       // ln(1 - T_e T_i), index l
};

double sigma3(int p) { return p == kE ? 1.0 : -1.0; }

Node prepare(double kappa_R, const Geometry& g, int l_max, const Materials& mats) {
  Node node;
  node.kappa_R = kappa_R;
  if (!(kappa_R > 0.0) || !std::isfinite(kappa_R)) throw DomainError("frequency must be positive and finite");
  if (g.a == 0.0 || 2.0 * kappa_R * g.gap() / g.R > kDecayCutoff) {
    node.vanishes = true;
    return node;
  }
  const double kr = kappa_R * g.r / g.R;
  const double n_m = mats.medium.refractive_index(kappa_R);
  node.t = n_m * kappa_R * g.a / g.R;

  const TDiagonal ti = scattering::inner_diagonal(l_max, kr, mats.inner, mats.medium);
  const TDiagonal te = scattering::cavity_diagonal(l_max, kappa_R, mats.cavity, mats.medium);

  std::vector<double> log_i;
  specfun::log_bessel_i(2 * l_max, node.t, log_i);
  node.ratio.resize(static_cast<std::size_t>(l_max));
  for (int d = 0; d < l_max; ++d) {
    auto& r = node.ratio[static_cast<std::size_t>(d)];
    const int count = (2 * l_max - d) / 2 + 1;
    r.resize(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) r[static_cast<std::size_t>(j)] = std::exp(log_i[d + 2 * j] - log_i[d]);
  }

  for (int pp = 0; pp < 2; ++pp) {
    for (int p = 0; p < 2; ++p) {
      auto& pre = node.pre[pp][p];
      pre.resize(l_max, l_max);
      for (int lp = 1; lp <= l_max; ++lp) {
        const double half_i = 0.5 * ti.log_abs(lp, pol_of(pp));
        for (int l = 1; l <= l_max; ++l) {
          pre(lp - 1, l - 1) = std::exp(half_i + 0.5 * te.log_abs(l, pol_of(p)) + log_i[std::abs(l - lp)]);
        }
      }
    }
  }

  for (int p = 0; p < 2; ++p) {
    node.metric_cavity[p].assign(static_cast<std::size_t>(l_max) + 1, 1.0);
    node.metric_inner[p].assign(static_cast<std::size_t>(l_max) + 1, 1.0);
    node.concentric[p].assign(static_cast<std::size_t>(l_max) + 1, 0.0);
    for (int l = 1; l <= l_max; ++l) {
      const int se = te.sign(l, pol_of(p));
      const int si = ti.sign(l, pol_of(p));
      node.metric_cavity[p][l] = (se == 0 ? 1.0 : se) * sigma3(p);
      node.metric_inner[p][l] = sigma3(p) * (si == 0 ? 1.0 : si);
      if (node.metric_cavity[p][l] < 0.0 || node.metric_inner[p][l] < 0.0) node.plain_metric = false;
      const double prod = se * si * std::exp(te.log_abs(l, pol_of(p)) + ti.log_abs(l, pol_of(p)));
      node.concentric[p][l] = (se == 0 || si == 0) ? 0.0 : std::log1p(-prod);
    }
  }
  return node;
}

// ln det(I - N_m) - sum ln(1 - T_e T_i) over the channels of block m.
double block_term(const Node& node, const translation::TranslationTable& table) {
  const int m = table.m();
  const int l_min = table.l_min();
  const int l_max = table.l_max();
  const int per = l_max - l_min + 1;
  const int n = 2 * per;

  // Real form of S_i V S_e (S = |T|^(1/2)) after conjugation with diag(i on E, 1 on M).
  Eigen::MatrixXd X(n, n);
  for (int lp = l_min; lp <= l_max; ++lp) {
    for (int l = l_min; l <= l_max; ++l) {
      const auto& pair = table.pair(lp, l);
      const auto& r = node.ratio[static_cast<std::size_t>(pair.lpp_min)];
      const double* mm = table.mm(pair);
      const double* b = table.b(pair);
      double smm = 0.0, sb = 0.0;
      for (int k = 0; k < pair.count; ++k) {
        smm += mm[k] * r[static_cast<std::size_t>(k)];
        sb += b[k] * r[static_cast<std::size_t>(k)];
      }
      const double em = node.t * m * sb / std::sqrt(l * (l + 1.0) * lp * (lp + 1.0));
      const int row = lp - l_min;
      const int col = l - l_min;
      X(row, col) = node.pre[kE][kE](lp - 1, l - 1) * smm;
      X(per + row, per + col) = node.pre[kM][kM](lp - 1, l - 1) * smm;
      X(row, per + col) = node.pre[kE][kM](lp - 1, l - 1) * em;
      X(per + row, col) = node.pre[kM][kE](lp - 1, l - 1) * em;
    }
  }
  if (!X.allFinite()) {
    std::ostringstream os;
    os << "non-finite round-trip entry at kappa R = " << node.kappa_R << ", m = " << m;
    throw NumericalRangeError(os.str());
  }

  double concentric = 0.0;
  for (int l = l_min; l <= l_max; ++l) concentric += node.concentric[kE][l] + node.concentric[kM][l];

  Eigen::MatrixXd G = Eigen::MatrixXd::Identity(n, n);
  double logdet = 0.0;
  if (node.plain_metric) {
    G.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose(), -1.0);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() == Eigen::Success) {
      const auto& L = llt.matrixLLT();
      for (int k = 0; k < n; ++k) logdet += 2.0 * std::log(L(k, k));
      return logdet - concentric;
    }
    G = Eigen::MatrixXd::Identity(n, n) - X.transpose() * X;
  } else {
    Eigen::VectorXd d_cav(n), d_in(n);
    for (int l = l_min; l <= l_max; ++l) {
      d_cav(l - l_min) = node.metric_cavity[kE][l];
      d_cav(per + l - l_min) = node.metric_cavity[kM][l];
      d_in(l - l_min) = node.metric_inner[kE][l];
      d_in(per + l - l_min) = node.metric_inner[kM][l];
    }
    G.noalias() -= d_cav.asDiagonal() * X.transpose() * d_in.asDiagonal() * X;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(G);
  const auto& LU = lu.matrixLU();
  double sign = lu.permutationP().determinant();
  for (int k = 0; k < n; ++k) {
    const double v = LU(k, k);
    if (v < 0.0) sign = -sign;
    logdet += std::log(std::abs(v));
  }
  if (!(sign > 0.0) || !std::isfinite(logdet)) {
    std::ostringstream os;
    os << "det(I - N) is not positive at kappa R = " << node.kappa_R << ", m = " << m;
    throw NumericalRangeError(os.str());
  }
  return logdet - concentric;
}

void check_lmax(int l_max) {
  if (l_max < 1 || 2 * l_max > specfun::kMaxBesselOrder) {
    throw DomainError("l_max = " + std::to_string(l_max) + " outside [1, " +
                      std::to_string(specfun::kMaxBesselOrder / 2) + "]");
  }
}

}  // namespace

Geometry Geometry::from_ratio(double r_over_R, double x) {
  Geometry g;
  g.R = 1.0;
  g.r = r_over_R;
  g.a = x * (1.0 - r_over_R);
  g.validate();
  return g;
}

void Geometry::validate() const {
  if (!(r > 0.0) || !(R > r)) throw DomainError("geometry needs 0 < r < R");
  if (!(a >= 0.0) || !(a < R - r)) throw DomainError("geometry needs 0 <= a < R - r");
}

translation::BlockMatrix round_trip_block(int m, double kappa_R, const Geometry& geom, int l_max,
                                          const Materials& mats) {
  geom.validate();
  check_lmax(l_max);
  const double kr = kappa_R * geom.r / geom.R;
  const double t = mats.medium.refractive_index(kappa_R) * kappa_R * geom.a / geom.R;
  const TDiagonal ti = scattering::inner_diagonal(l_max, kr, mats.inner, mats.medium);
  const TDiagonal te = scattering::cavity_diagonal(l_max, kappa_R, mats.cavity, mats.medium);
  const auto v_ie = translation::v_block(m, l_max, t);
  const auto v_ei = translation::v_ei_from_v_ie(v_ie);

  const int n = v_ie.dimension();
  Eigen::VectorXcd d_i(n), d_e(n);
  for (int k = 0; k < n; ++k) {
    const auto c = v_ie.channel(k);
    d_i(k) = ti.value(c.l, c.pol);
    d_e(k) = te.value(c.l, c.pol);
  }
  translation::BlockMatrix out = v_ie;
  out.entries = d_e.asDiagonal() * v_ei.entries * d_i.asDiagonal() * v_ie.entries;
  return out;
}

double logdet_block(int m, double kappa_R, const Geometry& geom, int l_max, const Materials& mats) {
  geom.validate();
  check_lmax(l_max);
  const Node node = prepare(kappa_R, geom, l_max, mats);
  if (node.vanishes) return 0.0;
  const translation::TranslationTable table(m, l_max);
  return block_term(node, table);
}

std::vector<double> logdet_integrand_batch(const std::vector<double>& kappa_R, const Geometry& geom, int l_max,
                                           const Materials& mats) {
  geom.validate();
  check_lmax(l_max);
  std::vector<Node> nodes;
  nodes.reserve(kappa_R.size());
  for (double k : kappa_R) nodes.push_back(prepare(k, geom, l_max, mats));
  std::vector<double> out(kappa_R.size(), 0.0);
  bool any = false;
  for (const auto& n : nodes) any = any || !n.vanishes;
  if (!any) return out;

  // Blocks m and -m contribute equally.
  for (int m = 0; m <= l_max; ++m) {
    const translation::TranslationTable table(m, l_max);
    const double weight = m == 0 ? 1.0 : 2.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (nodes[k].vanishes) continue;
      out[k] += weight * block_term(nodes[k], table);
    }
  }
  return out;
}

double logdet_integrand(double kappa_R, const Geometry& geom, int l_max, const Materials& mats) {
  return logdet_integrand_batch({kappa_R}, geom, l_max, mats)[0];
}

EnergyResult casimir_energy_detailed(const Geometry& geom, int l_max, const QuadratureSpec& quad,
                                     const Materials& mats) {
  geom.validate();
  check_lmax(l_max);
  if (quad.nodes < 8) throw DomainError("quadrature needs at least 8 nodes");
  EnergyResult res;
  res.mapping = quad.mapping > 0.0 ? quad.mapping : geom.R / (2.0 * geom.gap());
  if (geom.a == 0.0) return res;

  auto estimate = [&](int n) {
    const auto& rule = quadrature::gauss_legendre(n);
    std::vector<double> kappa(static_cast<std::size_t>(n)), jac(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double t = rule.nodes[static_cast<std::size_t>(k)];
      kappa[static_cast<std::size_t>(k)] = res.mapping * t / (1.0 - t);
      jac[static_cast<std::size_t>(k)] = res.mapping / ((1.0 - t) * (1.0 - t));
    }
    const auto f = logdet_integrand_batch(kappa, geom, l_max, mats);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += rule.weights[static_cast<std::size_t>(k)] * jac[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(k)];
    }
    return sum / (2.0 * std::numbers::pi);
  };

  int n = quad.nodes;
  double coarse = estimate(n);
  while (true) {
    const int n2 = 2 * n;
    if (n2 > quad.max_nodes) {
      throw ConvergenceError("frequency quadrature did not converge within " + std::to_string(quad.max_nodes) +
                                 " nodes",
                             coarse, coarse);
    }
    const double fine = estimate(n2);
    if (std::abs(fine - coarse) <= quad.rel_tol * std::abs(fine) + quad.abs_tol) {
      res.energy = fine;
      res.coarse_estimate = coarse;
      res.nodes = n2;
      return res;
    }
    if (2 * n2 > quad.max_nodes) {
      throw ConvergenceError("frequency quadrature did not converge within " + std::to_string(quad.max_nodes) +
                                 " nodes",
                             coarse, fine);
    }
    coarse = fine;
    n = n2;
  }
}

double casimir_energy(const Geometry& geom, int l_max, const QuadratureSpec& quad, const Materials& mats) {
  return casimir_energy_detailed(geom, l_max, quad, mats).energy;
}

}  // namespace casimir::energy
