#include "casimir/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace casimir::quadrature {

const std::array<double, 8> Kronrod15::xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

const std::array<double, 8> Kronrod15::wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

const std::array<double, 4> Kronrod15::wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

namespace {

Rule build_rule(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // z is descending from near +1; map [-1, 1] -> (0, 1).
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + z);
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<Rule>(build_rule(n))).first;
  return *it->second;
}

double integrate_adaptive(const std::function<double(double)>& f, const std::vector<double>& points,
                          const AdaptiveOptions& opt) {
  auto vec = [&f](double x) { return std::array<double, 1>{f(x)}; };
  return integrate_adaptive<1>(vec, points, opt).value[0];
}

}  // namespace casimir::quadrature
