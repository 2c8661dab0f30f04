#include "casimir/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "casimir/errors.hpp"

namespace casimir::specfun {

namespace {

constexpr double kSeriesThreshold = 1e-3;

// Running log of a product of ratios. Multiplying in double and taking one log
// per rescale keeps the absolute error near eps instead of eps * |log|.
class LogProduct {
 public:
  explicit LogProduct(double log0) : base_(log0) {}

  double times(double factor) {
    mantissa_ *= factor;
    if (mantissa_ > 1e200 || mantissa_ < 1e-200) {
      int e = 0;
      mantissa_ = std::frexp(mantissa_, &e);
      exponent_ += e;
    }
    return base_ + std::log(mantissa_) + exponent_ * kLn2;
  }

 private:
  static constexpr double kLn2 = 0.69314718055994530942;
  double base_;
  double mantissa_ = 1.0;
  long exponent_ = 0;
};

void check_order(int max_order) {
  if (max_order < 0 || max_order > kMaxBesselOrder) {
    throw DomainError("Bessel order " + std::to_string(max_order) + " outside [0, " +
                      std::to_string(kMaxBesselOrder) + "]");
  }
}

double log_i0(double x) {
  if (x < 20.0) return std::log(std::sinh(x) / x);
  return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
}

// Ascending series i_l(x) = x^l/(2l+1)!! * sum_k (x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1)).
void series_i(int max_order, double x, std::vector<double>& log_i, std::vector<double>* dlog_i) {
  const double half_x2 = 0.5 * x * x;
  const double log_x = std::log(x);
  for (int l = 0; l <= max_order; ++l) {
    double term = 1.0;
    double sum = 1.0;
    double weighted = 0.0;  // sum of 2k t_k
    for (int k = 1; k < 30; ++k) {
      term *= half_x2 / (k * (2.0 * l + 2.0 * k + 1.0));
      sum += term;
      weighted += 2.0 * k * term;
      if (term < 1e-18 * sum) break;
    }
    log_i[l] = l * log_x - log_double_factorial_odd(l) + std::log(sum);
    if (dlog_i) (*dlog_i)[l] = (l + weighted / sum) / x;
  }
}

// Ratios rho_l = i_l / i_{l-1} for l = 1..max_order+1 by the backward continued fraction.
void ratio_i(int max_order, double x, std::vector<double>& rho) {
  const int top = std::max(max_order + 1, static_cast<int>(std::ceil(x))) + 40;
  rho.assign(static_cast<std::size_t>(max_order) + 2, 0.0);
  double next = 0.0;
  for (int n = top; n >= 1; --n) {
    const double cur = 1.0 / ((2.0 * n + 1.0) / x + next);
    if (n <= max_order + 1) rho[n] = cur;
    next = cur;
  }
}

void recurrence_i(int max_order, double x, std::vector<double>& log_i, std::vector<double>* dlog_i) {
  std::vector<double> rho;
  ratio_i(max_order, x, rho);
  log_i[0] = log_i0(x);
  LogProduct acc(log_i[0]);
  for (int l = 1; l <= max_order; ++l) log_i[l] = acc.times(rho[l]);
  if (dlog_i) {
    for (int l = 0; l <= max_order; ++l) (*dlog_i)[l] = l / x + rho[l + 1];
  }
}

// ---------------------------------------------------------------------------
// Wigner 3j recurrence in j1 (Schulten & Gordon):
//   j1 A(j1+1) f(j1+1) + B(j1) f(j1) + (j1+1) A(j1) f(j1-1) = 0

struct Recurrence {
  double j2, j3, m1, m2, m3;

  double a(double j1) const {
    const double t1 = j1 * j1 - (j2 - j3) * (j2 - j3);
    const double t2 = (j2 + j3 + 1.0) * (j2 + j3 + 1.0) - j1 * j1;
    const double t3 = j1 * j1 - m1 * m1;
    const double p = t1 * t2 * t3;
    return p > 0.0 ? std::sqrt(p) : 0.0;
  }

  double b(double j1) const {
    return -(2.0 * j1 + 1.0) *
           (j2 * (j2 + 1.0) * m1 - j3 * (j3 + 1.0) * m1 - j1 * (j1 + 1.0) * (m3 - m2));
  }
};

constexpr double kRescaleAbove = 1e150;

void rescale_if_needed(std::vector<double>& v, std::size_t upto) {
  if (std::abs(v[upto]) > kRescaleAbove) {
    for (std::size_t k = 0; k <= upto; ++k) v[k] /= kRescaleAbove;
  }
}

}  // namespace

double log_double_factorial_odd(int n) {
  // (2n+1)!! = (2n+1)! / (2^n n!)
  return std::lgamma(2.0 * n + 2.0) - n * std::log(2.0) - std::lgamma(n + 1.0);
}

ScaledBesselTable scaled_bessel(int max_order, double x) {
  check_order(max_order);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("scaled_bessel: argument must be positive and finite, got " + std::to_string(x));
  }
  ScaledBesselTable t;
  t.argument = x;
  t.max_order = max_order;
  const auto n = static_cast<std::size_t>(max_order) + 1;
  t.log_i.resize(n);
  t.log_k.resize(n);
  t.dlog_i.resize(n);
  t.dlog_k.resize(n);

  if (x < kSeriesThreshold) {
    series_i(max_order, x, t.log_i, &t.dlog_i);
  } else {
    recurrence_i(max_order, x, t.log_i, &t.dlog_i);
  }

  // k by upward recurrence of q_l = k_l / k_{l-1}; this direction is stable.
  t.log_k[0] = -x - std::log(x);
  t.dlog_k[0] = -(1.0 + 1.0 / x);
  double q = 1.0 + 1.0 / x;
  LogProduct acc(t.log_k[0]);
  for (int l = 1; l <= max_order; ++l) {
    if (l > 1) q = 1.0 / q + (2.0 * l - 1.0) / x;
    t.log_k[l] = acc.times(q);
    t.dlog_k[l] = -1.0 / q - (l + 1.0) / x;
  }

  t.i_scaled.resize(n);
  t.k_scaled.resize(n);
  t.di_scaled.resize(n);
  t.dk_scaled.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    t.i_scaled[l] = std::exp(t.log_i[l] - x);
    t.k_scaled[l] = std::exp(t.log_k[l] + x);
    t.di_scaled[l] = t.i_scaled[l] * t.dlog_i[l];
    t.dk_scaled[l] = t.k_scaled[l] * t.dlog_k[l];
  }
  return t;
}

void log_bessel_i(int max_order, double x, std::vector<double>& log_i) {
  check_order(max_order);
  log_i.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    std::fill(log_i.begin() + 1, log_i.end(), -std::numeric_limits<double>::infinity());
    return;
  }
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_bessel_i: argument must be nonnegative and finite");
  }
  if (x < kSeriesThreshold) {
    series_i(max_order, x, log_i, nullptr);
  } else {
    recurrence_i(max_order, x, log_i, nullptr);
  }
}

ThreeJSeries wigner3j_series(int j2, int j3, int m2, int m3) {
  ThreeJSeries out;
  const int m1 = -m2 - m3;
  if (j2 < 0 || j3 < 0 || std::abs(m2) > j2 || std::abs(m3) > j3) return out;
  const int jmin = std::max(std::abs(j2 - j3), std::abs(m1));
  const int jmax = j2 + j3;
  if (jmin > jmax) return out;
  out.j1_min = jmin;
  out.j1_max = jmax;
  const auto n = static_cast<std::size_t>(jmax - jmin + 1);
  const double sign_top = ((j2 - j3 - m1) % 2 == 0) ? 1.0 : -1.0;

  if (n == 1) {
    out.values.assign(1, sign_top / std::sqrt(2.0 * jmin + 1.0));
    return out;
  }

  const Recurrence rec{static_cast<double>(j2), static_cast<double>(j3), static_cast<double>(m1),
                       static_cast<double>(m2), static_cast<double>(m3)};

  // Forward from jmin.
  std::vector<double> fwd(n, 0.0);
  fwd[0] = 1.0;
  if (jmin == 0) {
    // j2 == j3 and m1 == 0: the recurrence is silent at j1 = 0; seed from
    // (1 j j; 0 m -m) / (0 j j; 0 m -m) = m / sqrt(j (j+1)).
    fwd[1] = m2 / std::sqrt(static_cast<double>(j2) * (j2 + 1.0));
  } else {
    fwd[1] = -rec.b(jmin) / (jmin * rec.a(jmin + 1.0));
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double j = jmin + static_cast<double>(k);
    fwd[k + 1] = -(rec.b(j) * fwd[k] + (j + 1.0) * rec.a(j) * fwd[k - 1]) / (j * rec.a(j + 1.0));
    rescale_if_needed(fwd, k + 1);
  }

  // Backward from jmax.
  std::vector<double> bwd(n, 0.0);
  bwd[n - 1] = 1.0;
  bwd[n - 2] = -rec.b(jmax) / ((jmax + 1.0) * rec.a(jmax));
  for (std::size_t k = n - 2; k >= 1; --k) {
    const double j = jmin + static_cast<double>(k);
    bwd[k - 1] = -(j * rec.a(j + 1.0) * bwd[k + 1] + rec.b(j) * bwd[k]) / ((j + 1.0) * rec.a(j));
    if (std::abs(bwd[k - 1]) > kRescaleAbove) {
      for (std::size_t q = k - 1; q < n; ++q) bwd[q] /= kRescaleAbove;
    }
  }

  // Match where both runs are large relative to their own maxima.
  double fmax = 0.0, bmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    fmax = std::max(fmax, std::abs(fwd[k]));
    bmax = std::max(bmax, std::abs(bwd[k]));
  }
  std::size_t pivot = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double score = std::min(std::abs(fwd[k]) / fmax, std::abs(bwd[k]) / bmax);
    if (score > best) {
      best = score;
      pivot = k;
    }
  }
  const std::size_t lo = pivot > 0 ? pivot - 1 : 0;
  const std::size_t hi = std::min(n - 1, pivot + 1);
  double num = 0.0, den = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    num += fwd[k] * bwd[k];
    den += bwd[k] * bwd[k];
  }
  const double scale = num / den;

  out.values.resize(n);
  double norm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = (k <= pivot) ? fwd[k] : scale * bwd[k];
    out.values[k] = v;
  }
  // Bring to order one before squaring.
  double vmax = 0.0;
  for (double v : out.values) vmax = std::max(vmax, std::abs(v));
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] /= vmax;
    norm += (2.0 * (jmin + static_cast<double>(k)) + 1.0) * out.values[k] * out.values[k];
  }
  double factor = 1.0 / std::sqrt(norm);
  if (out.values[n - 1] * sign_top < 0.0) factor = -factor;
  for (double& v : out.values) v *= factor;
  return out;
}

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (j1 < std::abs(j2 - j3) || j1 > j2 + j3) return 0.0;
  return wigner3j_series(j2, j3, m2, m3).at(j1);
}

double wigner3j(const ThreeJKey& key) {
  return wigner3j(key.l, key.lp, key.lpp, key.m, -key.mp, key.mp - key.m);
}

double lambda_pm(int l, int m, int sign) {
  if (std::abs(m) > l || l < 0) return 0.0;
  const double p = static_cast<double>(l - sign * m) * static_cast<double>(l + sign * m + 1);
  return p > 0.0 ? std::sqrt(p) : 0.0;
}

}  // namespace casimir::specfun
