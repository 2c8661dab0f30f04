#include "casimir/cp.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/specfun.hpp"

namespace casimir::cp {

using scattering::Polarization;

namespace {

enum Component { fE, fM, f0E, f0M, gE, gM, h1E, h1M, h2E, h2M, kComponents };
using Values = std::array<double, kComponents>;

// ln zeta^M and ln |zeta^E| (zeta^E < 0) for l = 0..l_max.
struct ZetaTable {
  std::vector<double> log_m, log_e;
};

ZetaTable zeta_table(int l_max, double x) {
  const auto b = specfun::scaled_bessel(l_max, x);
  ZetaTable z;
  z.log_m.resize(static_cast<std::size_t>(l_max) + 1);
  z.log_e.resize(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) {
    const auto s = static_cast<std::size_t>(l);
    const double num = 1.0 + x * b.dlog_k[s];
    const double den = 1.0 + x * b.dlog_i[s];
    if (!(den > 0.0) || !(num < 0.0)) {
      throw NumericalRangeError("unexpected sign in the E-polarization response at l = " + std::to_string(l));
    }
    z.log_m[s] = b.log_k[s] - b.log_i[s];
    z.log_e[s] = z.log_m[s] + std::log(-num / den);
  }
  return z;
}

// All integrands at one frequency x, l-sums included.
struct NodeResult {
  Values v{};
  int l_end = 0;
  double tail = 0.0;  // estimated remainder of the truncated l-sums (absolute)
};

NodeResult node_values(double x, double xi, int l_cut) {
  NodeResult out;
  const ZetaTable zt = zeta_table(l_cut, x);
  const double z = x * xi;
  std::vector<double> li;
  specfun::log_bessel_i(l_cut + 2, z, li);
  // Far out on the axis every term sits below e^-80 of the O(1) coefficients.
  if (zt.log_m[1] + 2.0 * li[0] + 5.0 * std::log(std::max(x, 1.0)) < -80.0) return out;
  // zeta (i_0(z)^2 - 1) from ln zeta, accurate for small z and safe for large z.
  auto zeta_i0sq_m1 = [&](double log_zeta) {
    if (li[0] < 0.5) return std::exp(log_zeta) * std::expm1(2.0 * li[0]);
    return std::exp(log_zeta + 2.0 * li[0]) - std::exp(log_zeta);
  };

  Values s3{}, s5{};  // sums multiplying x^3 and x^5
  double abs_sum = 0.0;
  double prev_mag = 0.0;
  double last_mag = 0.0;
  int l = 1;
  for (; l <= l_cut; ++l) {
    const auto L = static_cast<std::size_t>(l);
    const double zm = zt.log_m[L];
    const double ze = zt.log_e[L];
    auto em = [&](double lg) { return std::exp(zm + lg); };
    auto ee = [&](double lg) { return -std::exp(ze + lg); };
    const double la = 2.0 * li[L - 1];
    const double lb = 2.0 * li[L + 1];
    const double lc = 2.0 * li[L];
    const double lab = li[L - 1] + li[L + 1];
    const double dl = l;
    const double w = 2.0 * dl + 1.0;

    Values t{};
    // f: x^2 xi^2 (i_{l-1} - i_{l+1})^2 = (2l+1)^2 i_l^2.
    t[fE] = 0.5 * ((dl + 1.0) * ee(la) + dl * ee(lb)) - 0.5 * w * em(lc);
    t[fM] = 0.5 * ((dl + 1.0) * em(la) + dl * em(lb)) - 0.5 * w * ee(lc);
    if (l == 1) {
      t[f0E] = ee(0.0);
      t[f0M] = em(0.0);
    }
    const double ga = 0.5 * (dl * dl - 1.0);
    const double gb = 0.5 * dl * (dl + 2.0);
    const double gc = 3.0 * dl * (dl + 1.0);
    t[gE] = (ga * ee(la) + gb * ee(lb) - gc * ee(lab)) / (2.0 * w) + 0.25 * w * em(lc);
    t[gM] = (ga * em(la) + gb * em(lb) - gc * em(lab)) / (2.0 * w) + 0.25 * w * ee(lc);
    // h1, with the subtraction 2 zeta_1 folded into the l = 1 term.
    if (l == 1) {
      t[h1E] = -2.0 * zeta_i0sq_m1(ze) + ee(lb) - w * em(lc);
      t[h1M] = 2.0 * zeta_i0sq_m1(zm) + em(lb) - w * ee(lc);
    } else {
      t[h1E] = (dl + 1.0) * ee(la) + dl * ee(lb) - w * em(lc);
      t[h1M] = (dl + 1.0) * em(la) + dl * em(lb) - w * ee(lc);
    }

    // h2: quadrupole-order sums.
    const double q = 4.0 * dl * (dl + 1.0) - 3.0;
    const double c_lo = (dl - 1.0) * (dl + 1.0) * (2.0 * dl + 3.0);
    const double c_hi = dl * (dl + 2.0) * (2.0 * dl - 1.0);
    const double c_mid = 3.0 * dl + 1.5;
    const double lhi = 2.0 * li[L + 2];
    double pe = 0.0;
    double pm = 0.0;
    if (l >= 2) {
      const double llo = 2.0 * li[L - 2];
      if (l == 2) {
        // zeta_2 (i_0^2 - 1) / 6 absorbs the -zeta_2 / 6 subtraction.
        pe = -c_lo * zeta_i0sq_m1(ze);
        pm = c_lo * zeta_i0sq_m1(zm);
      } else {
        pe = c_lo * ee(llo);
        pm = c_lo * em(llo);
      }
    }
    pe += c_hi * ee(lhi) + c_mid * ee(lc);
    pm += c_hi * em(lhi) + c_mid * em(lc);

    // Cross-polarization part: the m-summed |V_EM(l, 2)|^2 reduces to
    // (5/2) [(l-1) i_{l-1}^2 + (l+2) i_{l+1}^2]; with T(2) = alpha_2 x^5 / 30 this gives 1/12.
    t[h2M] = pm / (6.0 * q) - ((dl - 1.0) * ee(la) + (dl + 2.0) * ee(lb)) / 12.0;
    t[h2E] = pe / (6.0 * q) - ((dl - 1.0) * em(la) + (dl + 2.0) * em(lb)) / 12.0;

    double mag = 0.0;
    for (int k = 0; k < kComponents; ++k) {
      if (k == h2E || k == h2M) {
        s5[static_cast<std::size_t>(k)] += t[static_cast<std::size_t>(k)];
      } else {
        s3[static_cast<std::size_t>(k)] += t[static_cast<std::size_t>(k)];
      }
      mag += std::abs(t[static_cast<std::size_t>(k)]);
    }
    abs_sum += mag;
    prev_mag = last_mag;
    last_mag = mag;
    if (l >= 3 && mag <= 1e-18 * abs_sum) break;
  }
  out.l_end = std::min(l, l_cut);
  if (l > l_cut) {
    // Geometric tail from the last two terms; terms that are still growing
    // (far out on the frequency axis) get a crude l_cut-fold bound.
    const double r = prev_mag > 0.0 ? last_mag / prev_mag : 1.0;
    out.tail = r < 0.99 ? last_mag * r / (1.0 - r) : last_mag * l_cut;
  }
  const double x3 = x * x * x;
  const double x5 = x3 * x * x;
  for (int k = 0; k < kComponents; ++k) {
    const auto K = static_cast<std::size_t>(k);
    out.v[K] = (k == h2E || k == h2M) ? x5 * s5[K] : x3 * s3[K];
  }
  out.tail *= std::max(x3, x5);
  return out;
}

}  // namespace

double zeta(int l, Polarization pol, double x) {
  if (l < 1) throw DomainError("zeta needs l >= 1");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("zeta needs a positive finite argument");
  const ZetaTable z = zeta_table(l, x);
  const auto L = static_cast<std::size_t>(l);
  return pol == Polarization::M ? std::exp(z.log_m[L]) : -std::exp(z.log_e[L]);
}

energy::QuadratureSpec default_quadrature() {
  energy::QuadratureSpec q;
  q.nodes = 32;
  q.rel_tol = 1e-12;
  q.abs_tol = 1e-14;
  q.max_nodes = 2048;
  return q;
}

CpCoefficients cp_coefficients(double xi, int l_cut, const energy::QuadratureSpec& quad) {
  if (!(xi >= 0.0 && xi < 1.0)) throw DomainError("xi = a/R must lie in [0, 1)");
  if (l_cut < 2 || l_cut + 2 > specfun::kMaxBesselOrder) throw DomainError("l_cut must lie in [2, 198]");
  if (quad.nodes < 8) throw DomainError("quadrature needs at least 8 nodes");

  CpCoefficients res;
  res.xi = xi;
  res.l_cut = l_cut;
  res.mapping = quad.mapping > 0.0 ? quad.mapping : 1.0 / (2.0 * (1.0 - xi));

  struct Estimate {
    Values v{};
    double tail = 0.0;
    int l_used = 0;
  };
  auto estimate = [&](int n) {
    const auto& rule = quadrature::gauss_legendre(n);
    Estimate e;
    for (int k = 0; k < n; ++k) {
      const double t = rule.nodes[static_cast<std::size_t>(k)];
      const double x = res.mapping * t / (1.0 - t);
      const double wt = rule.weights[static_cast<std::size_t>(k)] * res.mapping / ((1.0 - t) * (1.0 - t));
      const NodeResult r = node_values(x, xi, l_cut);
      for (std::size_t c = 0; c < r.v.size(); ++c) e.v[c] += wt * r.v[c];
      e.tail += wt * r.tail;
      e.l_used = std::max(e.l_used, r.l_end);
    }
    return e;
  };

  auto close = [&](const Estimate& a, const Estimate& b) {
    for (std::size_t c = 0; c < a.v.size(); ++c) {
      if (std::abs(a.v[c] - b.v[c]) > quad.rel_tol * std::abs(b.v[c]) + quad.abs_tol) return false;
    }
    return true;
  };

  int n = quad.nodes;
  Estimate coarse = estimate(n);
  Estimate fine;
  while (true) {
    if (2 * n > quad.max_nodes) {
      throw ConvergenceError("coefficient quadrature did not converge within " + std::to_string(quad.max_nodes) +
                                 " nodes",
                             coarse.v[fE], fine.v[fE]);
    }
    fine = estimate(2 * n);
    if (close(coarse, fine)) break;
    coarse = fine;
    n *= 2;
  }

  double scale = 0.0;
  for (double v : fine.v) scale = std::max(scale, std::abs(v));
  if (fine.tail > 1e-10 * std::max(scale, 1.0)) {
    throw ConvergenceError("multipole sums not converged at l_cut = " + std::to_string(l_cut) +
                               "; increase l_cut",
                           fine.v[fE], fine.v[fE] + fine.tail);
  }

  res.f_E = fine.v[fE];
  res.f_M = fine.v[fM];
  res.f0_E = fine.v[f0E];
  res.f0_M = fine.v[f0M];
  res.g_E = fine.v[gE];
  res.g_M = fine.v[gM];
  res.h1_E = fine.v[h1E];
  res.h1_M = fine.v[h1M];
  res.h2_E = fine.v[h2E];
  res.h2_M = fine.v[h2M];
  res.l_used = fine.l_used;
  res.nodes = 2 * n;
  res.tail = fine.tail;
  return res;
}

double cp_energy_tensor(const CpCoefficients& c, const DipoleTensors& t, double R) {
  if (!(R > 0.0)) throw DomainError("cavity radius must be positive");
  auto part = [](double f, double f0, double g, const Eigen::Matrix3d& a) {
    return (f - f0) * a.trace() + g * (2.0 * a(2, 2) - a(0, 0) - a(1, 1));
  };
  const double sum = part(c.f_E, c.f0_E, c.g_E, t.alpha_E) + part(c.f_M, c.f0_M, c.g_M, t.alpha_M);
  return sum / (3.0 * std::numbers::pi * std::pow(R, 4));
}

double cp_energy_tensor(const DipoleTensors& t, double xi, double R) {
  return cp_energy_tensor(cp_coefficients(xi), t, R);
}

double cp_energy_spherical(const CpCoefficients& c, const scattering::PolarizabilitySet& pols, double R, int order) {
  if (!(R > 0.0)) throw DomainError("cavity radius must be positive");
  if (order != 3 && order != 5) throw DomainError("order must be 3 or 5");
  if (pols.l_cut() < 1 || (order == 5 && pols.l_cut() < 2)) {
    throw DomainError("polarizability set does not reach the requested order");
  }
  const double R3 = R * R * R;
  double sum = (c.h1_M * pols.alpha(1, Polarization::M) + c.h1_E * pols.alpha(1, Polarization::E)) / R3;
  if (order == 5) {
    sum += (c.h2_M * pols.alpha(2, Polarization::M) + c.h2_E * pols.alpha(2, Polarization::E)) / (R3 * R * R);
  }
  return sum / (2.0 * std::numbers::pi * R);
}

double cp_energy_spherical(const scattering::PolarizabilitySet& pols, double xi, double R, int order) {
  return cp_energy_spherical(cp_coefficients(xi), pols, R, order);
}

}  // namespace casimir::cp
