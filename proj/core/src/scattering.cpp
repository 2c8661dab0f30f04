#include "casimir/scattering.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/specfun.hpp"

namespace casimir::scattering {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_l(int l) {
  if (l < 1) throw DomainError("T-matrix requested for l = " + std::to_string(l) + "; there is no monopole channel");
}

void check_arg(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("T-matrix frequency argument must be positive");
}

TDiagonal make_diagonal(int l_max) {
  TDiagonal d;
  const auto n = static_cast<std::size_t>(l_max) + 1;
  d.log_abs_E.assign(n, kNegInf);
  d.log_abs_M.assign(n, kNegInf);
  d.sign_E.assign(n, 0);
  d.sign_M.assign(n, 0);
  return d;
}

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

// Stores -exp(log_ratio) * num / den.
void store(TDiagonal& d, int l, Polarization pol, double log_ratio, double num, double den) {
  double log_abs = kNegInf;
  int s = 0;
  if (num != 0.0) {
    log_abs = log_ratio + std::log(std::abs(num)) - std::log(std::abs(den));
    s = -sgn(num) * sgn(den);
  }
  if (pol == Polarization::E) {
    d.log_abs_E[l] = log_abs;
    d.sign_E[l] = s;
  } else {
    d.log_abs_M[l] = log_abs;
    d.sign_M[l] = s;
  }
}

}  // namespace

MaterialResponse MaterialResponse::perfect_conductor() { return MaterialResponse{}; }

MaterialResponse MaterialResponse::vacuum() { return dielectric(1.0, 1.0); }

MaterialResponse MaterialResponse::dielectric(double eps, double mu) {
  if (!(eps > 0.0) || !(mu > 0.0)) throw DomainError("dielectric constants must be positive");
  MaterialResponse m;
  m.kind = Kind::Dielectric;
  m.epsilon = [eps](double) { return eps; };
  m.mu = [mu](double) { return mu; };
  return m;
}

double MaterialResponse::eps_at(double arg) const { return epsilon ? epsilon(arg) : 1.0; }
double MaterialResponse::mu_at(double arg) const { return mu ? mu(arg) : 1.0; }

double MaterialResponse::refractive_index(double arg) const {
  if (is_perfect_conductor()) throw DomainError("a perfect conductor has no refractive index");
  return std::sqrt(eps_at(arg) * mu_at(arg));
}

double PolarizabilitySet::alpha(int l, Polarization pol) const {
  if (l < 1 || l > l_cut()) throw DomainError("polarizability order outside the stored range");
  return pol == Polarization::E ? alpha_E[l] : alpha_M[l];
}

double TDiagonal::value(int l, Polarization pol) const {
  const int s = sign(l, pol);
  return s == 0 ? 0.0 : s * std::exp(log_abs(l, pol));
}

TDiagonal inner_diagonal(int l_max, double kappa_r, const MaterialResponse& mat, const MaterialResponse& medium) {
  check_arg(kappa_r);
  TDiagonal d = make_diagonal(l_max);
  if (l_max < 1) return d;
  const double n_m = medium.refractive_index(kappa_r);
  const double z_m = n_m * kappa_r;
  const auto out = specfun::scaled_bessel(l_max, z_m);

  if (mat.is_perfect_conductor()) {
    for (int l = 1; l <= l_max; ++l) {
      const double ratio = out.log_i[l] - out.log_k[l];
      store(d, l, Polarization::M, ratio, 1.0, 1.0);
      store(d, l, Polarization::E, ratio, 1.0 + z_m * out.dlog_i[l], 1.0 + z_m * out.dlog_k[l]);
    }
    return d;
  }

  const double n_i = mat.refractive_index(kappa_r);
  const double z_i = n_i * kappa_r;
  const auto in = specfun::scaled_bessel(l_max, z_i);
  for (int l = 1; l <= l_max; ++l) {
    const double ratio = out.log_i[l] - out.log_k[l];
    const double d_inside = 1.0 + z_i * in.dlog_i[l];
    const double d_reg = 1.0 + z_m * out.dlog_i[l];
    const double d_out = 1.0 + z_m * out.dlog_k[l];
    for (Polarization pol : {Polarization::E, Polarization::M}) {
      const double p_med = pol == Polarization::E ? medium.eps_at(kappa_r) : medium.mu_at(kappa_r);
      const double p_obj = pol == Polarization::E ? mat.eps_at(kappa_r) : mat.mu_at(kappa_r);
      const double a = p_med * d_inside;
      store(d, l, pol, ratio, a - p_obj * d_reg, a - p_obj * d_out);
    }
  }
  return d;
}

TDiagonal cavity_diagonal(int l_max, double kappa_R, const MaterialResponse& mat, const MaterialResponse& medium) {
  check_arg(kappa_R);
  TDiagonal d = make_diagonal(l_max);
  if (l_max < 1) return d;
  const double n_m = medium.refractive_index(kappa_R);
  const double z_m = n_m * kappa_R;
  const auto in = specfun::scaled_bessel(l_max, z_m);

  if (mat.is_perfect_conductor()) {
    for (int l = 1; l <= l_max; ++l) {
      const double ratio = in.log_k[l] - in.log_i[l];
      store(d, l, Polarization::M, ratio, 1.0, 1.0);
      store(d, l, Polarization::E, ratio, 1.0 + z_m * in.dlog_k[l], 1.0 + z_m * in.dlog_i[l]);
    }
    return d;
  }

  const double n_e = mat.refractive_index(kappa_R);
  const double z_e = n_e * kappa_R;
  const auto wall = specfun::scaled_bessel(l_max, z_e);
  for (int l = 1; l <= l_max; ++l) {
    const double ratio = in.log_k[l] - in.log_i[l];
    const double d_wall = 1.0 + z_e * wall.dlog_k[l];
    const double d_out = 1.0 + z_m * in.dlog_k[l];
    const double d_reg = 1.0 + z_m * in.dlog_i[l];
    for (Polarization pol : {Polarization::E, Polarization::M}) {
      const double p_med = pol == Polarization::E ? medium.eps_at(kappa_R) : medium.mu_at(kappa_R);
      const double p_obj = pol == Polarization::E ? mat.eps_at(kappa_R) : mat.mu_at(kappa_R);
      const double a = p_med * d_wall;
      store(d, l, pol, ratio, a - p_obj * d_out, a - p_obj * d_reg);
    }
  }
  return d;
}

double t_inner(int l, Polarization pol, double kappa_r, const MaterialResponse& mat, const MaterialResponse& medium) {
  check_l(l);
  return inner_diagonal(l, kappa_r, mat, medium).value(l, pol);
}

double t_cavity(int l, Polarization pol, double kappa_R, const MaterialResponse& mat, const MaterialResponse& medium) {
  check_l(l);
  return cavity_diagonal(l, kappa_R, mat, medium).value(l, pol);
}

double t_multipole(int l, Polarization pol, double kappa, const PolarizabilitySet& pols) {
  check_l(l);
  const double sign = (l % 2 == 1) ? 1.0 : -1.0;
  const double log_fact = specfun::log_double_factorial_odd(l) + specfun::log_double_factorial_odd(l - 1);
  const double coeff = sign * (l + 1.0) * pols.alpha(l, pol) / l * std::exp(-log_fact);
  return coeff * std::pow(kappa, 2 * l + 1);
}

PolarizabilitySet pec_polarizabilities(double r, int l_cut) {
  if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
  PolarizabilitySet p;
  p.alpha_E.assign(static_cast<std::size_t>(l_cut) + 1, 0.0);
  p.alpha_M.assign(static_cast<std::size_t>(l_cut) + 1, 0.0);
  for (int l = 1; l <= l_cut; ++l) {
    const double v = std::pow(r, 2 * l + 1);
    p.alpha_E[l] = v;
    p.alpha_M[l] = -l * v / (l + 1.0);
  }
  return p;
}

}  // namespace casimir::scattering
