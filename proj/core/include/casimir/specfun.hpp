#pragma once

#include <vector>

namespace casimir::specfun {

/// Highest Bessel order the tables are built for.
inline constexpr int kMaxBesselOrder = 200;

/// Modified spherical Bessel functions of the first (i_l) and third (k_l) kind
/// at a single positive argument, for every order l = 0..max_order.
///
/// Normalization: i_l(x) = sqrt(pi/2x) I_{l+1/2}(x) and k_l(x) = sqrt(2/(pi x)) K_{l+1/2}(x),
/// so i_0 = sinh(x)/x, k_0 = exp(-x)/x and x^2 (i_l k_l' - i_l' k_l) = -1.
///
/// The scaled members hold exp(-x) i_l and exp(x) k_l. At high order and small
/// argument those leave the double range, so the log members (natural log of
/// the unscaled value) and the logarithmic derivatives are the authoritative
/// representation; everything downstream folds exponents from them.
struct ScaledBesselTable {
  double argument = 0.0;
  int max_order = 0;

  std::vector<double> i_scaled;   ///< exp(-x) i_l(x)
  std::vector<double> k_scaled;   ///< exp(x) k_l(x)
  std::vector<double> di_scaled;  ///< exp(-x) i_l'(x)
  std::vector<double> dk_scaled;  ///< exp(x) k_l'(x)

  std::vector<double> log_i;   ///< ln i_l(x)
  std::vector<double> log_k;   ///< ln k_l(x)
  std::vector<double> dlog_i;  ///< i_l'(x) / i_l(x)
  std::vector<double> dlog_k;  ///< k_l'(x) / k_l(x)
};

/// Builds the table. k_l comes from upward recurrence of k_{l+1}/k_l, i_l from
/// downward recurrence of i_l/i_{l-1} (Miller's method in ratio form, anchored
/// on i_0 = sinh(x)/x); below x = 1e-3 i_l is summed from its power series.
/// Throws DomainError for x <= 0 or an order outside [0, kMaxBesselOrder].
ScaledBesselTable scaled_bessel(int max_order, double x);

/// Log-only variant for hot loops: fills ln i_l(x) for l = 0..max_order.
/// Unlike scaled_bessel it accepts x = 0, returning ln 1 = 0 for l = 0 and -inf above.
void log_bessel_i(int max_order, double x, std::vector<double>& log_i);

/// Key of a Wigner 3j symbol in the translation-matrix layout
/// (l l' l''; m, -m', m'-m).
struct ThreeJKey {
  int l = 0;
  int lp = 0;
  int lpp = 0;
  int m = 0;
  int mp = 0;
};

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Returns 0 when a selection rule fails.
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// Wigner 3j symbol for a translation-matrix key.
double wigner3j(const ThreeJKey& key);

/// All symbols (j1 j2 j3; -m2-m3, m2, m3) for j1 = j1_min..j2+j3, computed by the
/// three-term recurrence in j1, run from both ends and matched in the classically
/// allowed region, then normalized by sum (2 j1 + 1) f^2 = 1.
struct ThreeJSeries {
  int j1_min = 0;
  int j1_max = -1;
  std::vector<double> values;

  double at(int j1) const {
    return (j1 < j1_min || j1 > j1_max) ? 0.0 : values[static_cast<std::size_t>(j1 - j1_min)];
  }
};

ThreeJSeries wigner3j_series(int j2, int j3, int m2, int m3);

/// sqrt((l - sign m)(l + sign m + 1)); zero when |m| > l. sign must be +1 or -1.
double lambda_pm(int l, int m, int sign);

/// ln((2n+1)!!), exact up to rounding.
double log_double_factorial_odd(int n);

}  // namespace casimir::specfun
