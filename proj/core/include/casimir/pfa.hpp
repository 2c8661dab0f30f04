#pragma once

namespace casimir::pfa {

/// Reference surface for the full PFA: rays leave the smaller sphere (r-based)
/// or the larger sphere / cavity wall (R-based) along its radius.
enum class Basis { r_based, R_based };

/// y = r/R signed: y < 0 interior (sphere in a cavity), y > 0 exterior, y = 0 sphere-plane.
/// d_over_r is the closest surface separation in units of the smaller radius r.
struct PfaConfig {
  double y = -0.5;
  double d_over_r = 0.1;
  Basis basis = Basis::r_based;

  /// Throws DomainError for y outside (-1, 1], d_over_r <= 0, or (interior)
  /// a separation larger than the concentric one.
  void validate() const;
};

/// Leading PFA force -(pi^3 / 360) rR / (R + r) / d^3 in units hbar c = 1.
/// R is signed (negative for a cavity); an infinite R gives the sphere-plane limit.
double pfa_force_limit(double d, double r, double R);

/// Matching leading energy -(pi^3 / 720) rR / (R + r) / d^2.
double pfa_energy_limit(double d, double r, double R);

struct FullPfa {
  double energy = 0.0;
  double force = 0.0;  ///< -dE/dd at fixed radii
};

/// Full-PFA energy and force. Lengths are in the unit of R_scale, which is |R|
/// for y != 0 and the sphere radius r in the sphere-plane case y = 0. Energies
/// are in hbar c per length unit, forces in hbar c per length unit squared.
/// The interior energy is measured from the concentric configuration.
FullPfa full_pfa(const PfaConfig& cfg, double R_scale = 1.0);
double full_pfa_energy(const PfaConfig& cfg, double R_scale = 1.0);
double full_pfa_force(const PfaConfig& cfg, double R_scale = 1.0);

/// Closed-form d/r coefficient of the full-PFA energy:
/// r-based -y - y/(1+y) - 3, R-based -(3y + y/(1+y) + 1). Throws at y = -1.
double theta1_fpfa(double y, Basis basis);

/// The same coefficient read off the numerical full-PFA energy. The ratio
/// (E / E_leading - 1) / (d/r) = theta1 + A h ln h + B h + ... is sampled at
/// d/r = h, h/2, h/4 and the three-term model solved exactly.
double theta1_numeric(double y, Basis basis, double h = 1e-4);

}  // namespace casimir::pfa
