#include "casimir/pfa.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

namespace casimir::pfa {

namespace {

constexpr double kPi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;

// Forward-mode dual number carrying d/d(d).
struct Dual {
  double v = 0.0;
  double d = 0.0;
};

Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual operator+(Dual a, double b) { return {a.v + b, a.d}; }
Dual operator+(double a, Dual b) { return {a + b.v, b.d}; }
Dual operator-(double a, Dual b) { return {a - b.v, -b.d}; }
Dual operator-(Dual a, double b) { return {a.v - b, a.d}; }
Dual operator*(Dual a, double b) { return {a.v * b, a.d * b}; }
Dual operator/(double a, Dual b) { return {a / b.v, -a * b.d / (b.v * b.v)}; }

Dual sqrt_clamped(Dual a) {
  if (a.v <= 0.0) return {0.0, 0.0};
  const double s = std::sqrt(a.v);
  return {s, 0.5 * a.d / s};
}

Dual inv_cube(Dual l) {
  const double i = 1.0 / l.v;
  const double i3 = i * i * i;
  return {i3, -3.0 * l.d * i3 * i};
}

using Pair = std::array<double, 2>;

// Breakpoints 0, d/8, d/2, 2d, ... below the upper limit `top`.
std::vector<double> geometric_points(double d, double top) {
  std::vector<double> pts{0.0};
  for (double w = d / 8.0; w < top; w *= 4.0) pts.push_back(w);
  pts.push_back(top);
  return pts;
}

// Same breakpoints pulled back through w = w_max p (2 - p).
std::vector<double> mapped_points(double d, double w_max) {
  std::vector<double> pts{0.0};
  for (double w = d / 8.0; w < w_max; w *= 4.0) pts.push_back(1.0 - std::sqrt(1.0 - w / w_max));
  pts.push_back(1.0);
  return pts;
}

quadrature::AdaptiveOptions options() {
  quadrature::AdaptiveOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 0.0;
  o.max_intervals = 20000;
  return o;
}

// Integral of 1/l^3 over the reference surface and its d-derivative, r = 1.
Pair surface_integral(double y, double d, Basis basis) {
  const Dual dd{d, 1.0};
  const auto opt = options();

  if (y == 0.0) {
    if (basis == Basis::r_based) {
      // Plane at distance 1 + d from the sphere center; l = (d + w)/(1 - w), w = 1 - cos.
      auto f = [&](double w) {
        const Dual l = (dd + w) / Dual{1.0 - w, 0.0};
        const Dual v = inv_cube(l);
        return Pair{v.v, v.d};
      };
      return quadrature::integrate_adaptive<2>(f, geometric_points(d, 1.0), opt).value;
    }
    // Normal rays from the plane: rho d rho = (1 - v) dv with l = d + v.
    auto f = [&](double v) {
      const Dual g = Dual{1.0 - v, 0.0} * inv_cube(dd + v);
      return Pair{g.v, g.d};
    };
    return quadrature::integrate_adaptive<2>(f, geometric_points(d, 1.0), opt).value;
  }

  const double Rb = 1.0 / std::abs(y);
  if (y < 0.0) {
    const Dual a = (Rb - 1.0) - dd;
    if (basis == Basis::r_based) {
      auto f = [&](double w) {
        const double w2 = w * (2.0 - w);
        const Dual S = sqrt_clamped(Rb * Rb - a * a * w2);
        const Dual c = S + a * (1.0 - w);
        const Dual gap = 1.0 + dd;
        const Dual l = dd + a * w * (gap + gap * (Rb + a) / c) / (Rb + S);
        const Dual v = inv_cube(l);
        return Pair{v.v, v.d};
      };
      return quadrature::integrate_adaptive<2>(f, geometric_points(d, 2.0), opt).value;
    }
    auto ell = [&](Dual w) {
      const Dual w2 = w * (2.0 - w);
      const Dual S = sqrt_clamped(1.0 - a * a * w2);
      return dd + a * w + a * a * w2 / (1.0 + S);
    };
    if (a.v <= 1.0) {
      auto f = [&](double w) {
        const Dual v = inv_cube(ell(Dual{w, 0.0}));
        return Pair{Rb * Rb * v.v, Rb * Rb * v.d};
      };
      return quadrature::integrate_adaptive<2>(f, geometric_points(d, 2.0), opt).value;
    }
    // Only rays with cos >= sqrt(1 - 1/a^2) reach the inner sphere.
    const Dual inv_a2 = 1.0 / (a * a);
    const Dual w_max = inv_a2 / (1.0 + sqrt_clamped(1.0 - inv_a2));
    auto f = [&](double p) {
      const Dual w = w_max * (p * (2.0 - p));
      const Dual jac = w_max * (2.0 * (1.0 - p));
      const Dual v = jac * inv_cube(ell(w));
      return Pair{Rb * Rb * v.v, Rb * Rb * v.d};
    };
    return quadrature::integrate_adaptive<2>(f, mapped_points(d, w_max.v), opt).value;
  }

  // Exterior: centers a distance D = Rb + 1 + d apart.
  const Dual D = (Rb + 1.0) + dd;
  if (basis == Basis::r_based) {
    const Dual q = (Rb * Rb) / (D * D);
    const Dual w_max = q / (1.0 + sqrt_clamped(1.0 - q));
    auto f = [&](double p) {
      const Dual w = w_max * (p * (2.0 - p));
      const Dual jac = w_max * (2.0 * (1.0 - p));
      const Dual S = sqrt_clamped(Rb * Rb - D * D * w * (2.0 - w));
      const Dual gap = 1.0 + dd;  // D - Rb
      const Dual l = dd + D * w * (gap + gap * (D + Rb) / (D * (1.0 - w) + S)) / (Rb + S);
      const Dual v = jac * inv_cube(l);
      return Pair{v.v, v.d};
    };
    return quadrature::integrate_adaptive<2>(f, mapped_points(d, w_max.v), opt).value;
  }
  const Dual q = 1.0 / (D * D);
  const Dual w_max = q / (1.0 + sqrt_clamped(1.0 - q));
  auto f = [&](double p) {
    const Dual w = w_max * (p * (2.0 - p));
    const Dual jac = w_max * (2.0 * (1.0 - p));
    const Dual S = sqrt_clamped(1.0 - D * D * w * (2.0 - w));
    const Dual l = dd + D * w * ((Rb + dd) + (D * D - 1.0) / (D * (1.0 - w) + S)) / (1.0 + S);
    const Dual v = jac * inv_cube(l);
    return Pair{Rb * Rb * v.v, Rb * Rb * v.d};
  };
  return quadrature::integrate_adaptive<2>(f, mapped_points(d, w_max.v), opt).value;
}

// Energy and force for r = 1 (units hbar c / r and hbar c / r^2).
FullPfa unit_sphere(double y, double d, Basis basis) {
  const Pair I = surface_integral(y, d, basis);
  double concentric = 0.0;
  if (y < 0.0) {
    const double Rb = 1.0 / std::abs(y);
    const double w = basis == Basis::r_based ? 1.0 : Rb * Rb;
    concentric = 2.0 * w / std::pow(Rb - 1.0, 3);
  }
  FullPfa out;
  out.energy = -kPi3 / 360.0 * (I[0] - concentric);
  out.force = kPi3 / 360.0 * I[1];
  return out;
}

double reduced_radius(double r, double R) {
  if (std::isinf(R)) return r;
  if (R + r == 0.0) throw DomainError("rR/(R+r) is singular for R = -r");
  return r * R / (R + r);
}

}  // namespace

void PfaConfig::validate() const {
  if (!(y > -1.0) || !(y <= 1.0)) throw DomainError("PFA ratio y must lie in (-1, 1]");
  if (!(d_over_r > 0.0) || !std::isfinite(d_over_r)) throw DomainError("PFA separation must be positive");
  if (y < 0.0 && d_over_r > 1.0 / std::abs(y) - 1.0 + 1e-15) {
    throw DomainError("interior separation exceeds the concentric gap");
  }
}

double pfa_force_limit(double d, double r, double R) {
  if (!(d > 0.0)) throw DomainError("separation must be positive");
  return -kPi3 / 360.0 * reduced_radius(r, R) / (d * d * d);
}

double pfa_energy_limit(double d, double r, double R) {
  if (!(d > 0.0)) throw DomainError("separation must be positive");
  return -kPi3 / 720.0 * reduced_radius(r, R) / (d * d);
}

FullPfa full_pfa(const PfaConfig& cfg, double R_scale) {
  cfg.validate();
  if (!(R_scale > 0.0)) throw DomainError("length scale must be positive");
  const double r = cfg.y == 0.0 ? R_scale : std::abs(cfg.y) * R_scale;
  FullPfa u = unit_sphere(cfg.y, cfg.d_over_r, cfg.basis);
  u.energy /= r;
  u.force /= r * r;
  return u;
}

double full_pfa_energy(const PfaConfig& cfg, double R_scale) { return full_pfa(cfg, R_scale).energy; }

double full_pfa_force(const PfaConfig& cfg, double R_scale) { return full_pfa(cfg, R_scale).force; }

double theta1_fpfa(double y, Basis basis) {
  if (!(y > -1.0)) throw DomainError("theta1 of the full PFA diverges at y = -1");
  const double t = y / (1.0 + y);
  return basis == Basis::r_based ? -y - t - 3.0 : -(3.0 * y + t + 1.0);
}

double theta1_numeric(double y, Basis basis, double h) {
  Eigen::Matrix3d A;
  Eigen::Vector3d g;
  for (int k = 0; k < 3; ++k) {
    const double d = h / std::pow(2.0, k);
    const double e = unit_sphere(y, d, basis).energy;
    const double lead = -kPi3 / 720.0 / (d * d * (1.0 + y));
    A(k, 0) = 1.0;
    A(k, 1) = d * std::log(d);
    A(k, 2) = d;
    g(k) = (e / lead - 1.0) / d;
  }
  return A.fullPivLu().solve(g)(0);
}

}  // namespace casimir::pfa
