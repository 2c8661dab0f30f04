#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir::quadrature {

/// Gauss-Legendre rule on the open unit interval (0, 1).
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to (0, 1). Rules are memoized behind a mutex.
const Rule& gauss_legendre(int n);

/// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (non-negative half).
struct Kronrod15 {
  static const std::array<double, 8> xgk;
  static const std::array<double, 8> wgk;
  static const std::array<double, 4> wg;
};

struct AdaptiveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

template <std::size_t N>
struct AdaptiveResult {
  std::array<double, N> value{};
  std::array<double, N> error{};
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod integration of a vector-valued integrand over
/// the union of [points[k], points[k+1]]. Every component must satisfy
/// error <= max(abs_tol, rel_tol |value|, 64 eps integral |f|). Throws ConvergenceError otherwise,
/// carrying the 7-point and 15-point estimates of component 0.
template <std::size_t N, class F>
AdaptiveResult<N> integrate_adaptive(F&& f, const std::vector<double>& points, const AdaptiveOptions& opt = {}) {
  using Vec = std::array<double, N>;
  struct Segment {
    double a, b;
    Vec value, gauss, error, absval;
    double weight;  // largest relative share of the error budget
    bool operator<(const Segment& o) const { return weight < o.weight; }
  };

  auto eval = [&](double a, double b) {
    Segment s{a, b, {}, {}, {}, {}, 0.0};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Vec fc = f(c);
    for (std::size_t k = 0; k < N; ++k) {
      s.value[k] = Kronrod15::wgk[7] * fc[k];
      s.gauss[k] = Kronrod15::wg[3] * fc[k];
      s.absval[k] = Kronrod15::wgk[7] * std::abs(fc[k]);
    }
    for (int j = 0; j < 7; ++j) {
      const double dx = h * Kronrod15::xgk[static_cast<std::size_t>(j)];
      const Vec f1 = f(c - dx);
      const Vec f2 = f(c + dx);
      for (std::size_t k = 0; k < N; ++k) {
        s.value[k] += Kronrod15::wgk[static_cast<std::size_t>(j)] * (f1[k] + f2[k]);
        s.absval[k] += Kronrod15::wgk[static_cast<std::size_t>(j)] * (std::abs(f1[k]) + std::abs(f2[k]));
        if (j % 2 == 1) s.gauss[k] += Kronrod15::wg[static_cast<std::size_t>(j / 2)] * (f1[k] + f2[k]);
      }
    }
    for (std::size_t k = 0; k < N; ++k) {
      s.value[k] *= h;
      s.gauss[k] *= h;
      s.absval[k] *= h;
      s.error[k] = std::abs(s.value[k] - s.gauss[k]);
    }
    return s;
  };

  std::priority_queue<Segment> heap;
  AdaptiveResult<N> res;
  for (std::size_t p = 0; p + 1 < points.size(); ++p) {
    if (points[p + 1] > points[p]) heap.push(eval(points[p], points[p + 1]));
  }
  int count = static_cast<int>(heap.size());

  while (true) {
    Vec total{}, err{}, mass{};
    std::vector<Segment> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
      all.push_back(heap.top());
      heap.pop();
    }
    for (const auto& s : all) {
      for (std::size_t k = 0; k < N; ++k) {
        total[k] += s.value[k];
        err[k] += s.error[k];
        mass[k] += s.absval[k];
      }
    }
    bool done = true;
    Vec budget{};
    for (std::size_t k = 0; k < N; ++k) {
      // A component that cancels to far below the integral of |f| cannot be
      // resolved past rounding; the floor keeps that from reading as failure.
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() * mass[k];
      budget[k] = std::max({opt.abs_tol, opt.rel_tol * std::abs(total[k]), floor});
      if (err[k] > budget[k]) done = false;
    }
    if (done || count >= opt.max_intervals) {
      res.value = total;
      res.error = err;
      res.intervals = count;
      if (!done) {
        double gauss0 = 0.0;
        for (const auto& s : all) gauss0 += s.gauss[0];
        throw ConvergenceError("adaptive quadrature did not reach tolerance", gauss0, total[0]);
      }
      return res;
    }
    for (auto& s : all) {
      double w = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        if (budget[k] > 0.0) w = std::max(w, s.error[k] / budget[k]);
        else w = std::max(w, s.error[k] > 0.0 ? HUGE_VAL : 0.0);
      }
      s.weight = w;
      heap.push(s);
    }
    // Bisect the worst segments until their share of the budget is reduced.
    const int splits = std::max(1, static_cast<int>(heap.size()) / 8);
    for (int k = 0; k < splits && !heap.empty(); ++k) {
      const Segment s = heap.top();
      heap.pop();
      const double mid = 0.5 * (s.a + s.b);
      heap.push(eval(s.a, mid));
      heap.push(eval(mid, s.b));
      ++count;
    }
  }
}

/// Scalar convenience wrapper.
double integrate_adaptive(const std::function<double(double)>& f, const std::vector<double>& points,
                          const AdaptiveOptions& opt = {});

}  // namespace casimir::quadrature
