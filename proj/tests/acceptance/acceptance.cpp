// Acceptance suite. Each criterion prints one line "criterion N: PASS|FAIL ..."
// followed by indented detail lines; the exit status is nonzero if any selected
// criterion fails. Select with --criterion N (repeatable); default is all.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "casimir/analysis.hpp"
#include "casimir/cp.hpp"
#include "casimir/energy.hpp"
#include "casimir/pfa.hpp"
#include "casimir/specfun.hpp"
#include "casimir/translation.hpp"
#include "oracles.hpp"

using namespace casimir;
using analysis::CurveSample;
using energy::Geometry;
using pfa::Basis;
using scattering::Polarization;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, std::string line) {
    pass = pass && ok;
    details.push_back((ok ? "ok   " : "FAIL ") + std::move(line));
  }
};

std::vector<int> ladder(int lo, int hi) {
  std::vector<int> v;
  for (int l = lo; l <= hi; l += 5) v.push_back(l);
  return v;
}

// Extrapolated E/E_fPFA along an x grid at fixed r/R.
struct RatioPoint {
  double x, u, e_inf, stderr_e, ratio;
};

std::vector<RatioPoint> ratio_sweep(double rho, const std::vector<double>& xs, const std::vector<int>& lad,
                                    Outcome& out) {
  std::vector<RatioPoint> pts;
  for (double x : xs) {
    const auto res = energy::energy_ladder(Geometry::from_ratio(rho, x), lad);
    const double u = (1 - rho) * (1 - x) / rho;
    const double ef = pfa::full_pfa_energy({-rho, u, Basis::r_based});
    pts.push_back({x, u, res.fit.e_inf, res.fit.e_inf_stderr, res.fit.e_inf / ef});
    out.details.push_back(fmt::format("     x = {:.4f}  d/r = {:.4f}  E_inf = {:.9g} +- {:.2e}  R = {:.6f}{}", x, u,
                                      res.fit.e_inf, res.fit.e_inf_stderr, res.fit.e_inf / ef,
                                      res.fit.warning ? "  (fit warning)" : ""));
  }
  return pts;
}

std::vector<double> grid(double x0, double dx, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(x0 + i * dx);
  return v;
}

double theta1_at(double rho, const std::vector<double>& xs, const std::vector<int>& lad, Outcome& out,
                 analysis::FitResult* fit_out = nullptr) {
  std::vector<CurveSample> pts;
  for (const auto& p : ratio_sweep(rho, xs, lad, out)) pts.push_back({p.u, p.ratio, 0.0});
  const auto fit = analysis::fit_energy_ansatz(pts);
  if (fit_out) *fit_out = fit;
  return fit.value("theta1_bar") + pfa::theta1_fpfa(-rho, Basis::r_based);
}

Outcome concentric_null() {
  Outcome o;
  for (double rho : {0.1, 0.5}) {
    const double e = energy::casimir_energy(Geometry::from_ratio(rho, 0.0), 15);
    o.check(std::abs(e) < 1e-12, fmt::format("r/R = {}: E(a = 0) = {:.3e}", rho, e));
  }
  return o;
}

Outcome cp_agreement() {
  Outcome o;
  for (double rho : {0.05, 0.1}) {
    const auto pols = scattering::pec_polarizabilities(rho, 2);
    for (double xi : {0.1, 0.2, 0.3, 0.4}) {
      const double e = energy::casimir_energy(Geometry{rho, 1.0, xi}, 15);
      const double ecp = cp::cp_energy_spherical(pols, xi, 1.0, 5);
      const double rel = std::abs(e - ecp) / std::abs(e);
      o.check(rel < 0.01, fmt::format("r/R = {:<4} a/R = {}: E = {:.8e}  E_CP = {:.8e}  error {:.3f}%", rho, xi, e,
                                      ecp, 100 * rel));
    }
  }
  return o;
}

Outcome h1_identity() {
  Outcome o;
  double worst_e = 0.0, worst_m = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const auto c = cp::cp_coefficients(0.1 * k);
    worst_e = std::max(worst_e, std::abs(c.h1_E - 2 * (c.f_E - c.f0_E)));
    worst_m = std::max(worst_m, std::abs(c.h1_M - 2 * (c.f_M - c.f0_M)));
  }
  o.check(worst_e < 1e-8, fmt::format("E: max |h1 - 2(f - f0)| = {:.3e}", worst_e));
  o.check(worst_m < 1e-8, fmt::format("M: max |h1 - 2(f - f0)| = {:.3e}", worst_m));
  return o;
}

Outcome pfa_limit() {
  Outcome o;
  const double u = 1e-4;
  for (double y : {-0.9, -0.5, 0.5, 1.0}) {
    const double r = std::abs(y), R = y < 0 ? -1.0 : 1.0;
    const double lead = pfa::pfa_force_limit(u * r, r, R);
    for (auto b : {Basis::r_based, Basis::R_based}) {
      const double f = pfa::full_pfa_force({y, u, b});
      const double rel = std::abs(f / lead - 1);
      o.check(rel < 1e-4, fmt::format("y = {:<4} {}-based: F/F_PFA - 1 = {:.3e}", y,
                                      b == Basis::r_based ? "r" : "R", f / lead - 1));
    }
  }
  return o;
}

Outcome theta1_fpfa() {
  Outcome o;
  for (double y : {-0.9, -0.5, -0.1}) {
    const double num = pfa::theta1_numeric(y, Basis::r_based);
    const double ref = -y - y / (1 + y) - 3;
    o.check(std::abs(num - ref) < 1e-4, fmt::format("y = {}: numeric {:.8f}  closed form {:.8f}", y, num, ref));
  }
  return o;
}

Outcome lmax25() {
  Outcome o;
  const auto g = Geometry::from_ratio(0.5, 0.7);
  const auto res = energy::energy_ladder(g, ladder(20, 45));
  double e25 = 0.0;
  for (const auto& s : res.samples) {
    if (s.l_max == 25) e25 = s.energy;
  }
  const double rel = std::abs(e25 - res.fit.e_inf) / std::abs(res.fit.e_inf);
  o.check(rel < 0.02, fmt::format("E(25) = {:.9f}  E(inf) = {:.9f} +- {:.1e}  difference {:.3f}%", e25,
                                  res.fit.e_inf, res.fit.e_inf_stderr, 100 * rel));
  return o;
}

Outcome close_fit() {
  Outcome o;
  analysis::FitResult fit;
  theta1_at(0.5, grid(0.8, 0.025, 4), ladder(20, 45), o, &fit);
  const double t1 = fit.value("theta1_bar");
  o.check(std::abs(t1 - 1.770) <= 0.20,
          fmt::format("theta1_bar = {:.4f} +- {:.4f} (target 1.770 +- 0.20), theta2_bar = {:.3f}", t1,
                      fit.error("theta1_bar"), fit.value("theta2_bar")));
  return o;
}

Outcome theta1_curve() {
  Outcome o;
  // r/R = 0.5: x in [0.825, 0.925] (d/r in [0.075, 0.175]).
  // r/R = 0.3: d/r in [0.1, 0.2], the same u range scaled to the smaller sphere.
  struct Run {
    double rho, x0, dx;
    int l_top;
  };
  for (const Run& run : {Run{0.5, 0.825, 0.025, 70}, Run{0.3, 1 - 0.2 * 0.3 / 0.7, 0.025 * 0.3 / 0.7, 80}}) {
    const double t1 = theta1_at(run.rho, grid(run.x0, run.dx, 5), ladder(30, run.l_top), o);
    const double curve = analysis::theta1_curve(1.05, 1.08, 1.38, -run.rho);
    o.check(std::abs(t1 - curve) < 0.15,
            fmt::format("y = {}: theta1 = {:.4f}  curve = {:.4f}  difference {:.4f}", -run.rho, t1, curve, t1 - curve));
  }
  return o;
}

Outcome oracles() {
  Outcome o;
  // block sum vs full matrix
  {
    const auto g = Geometry::from_ratio(0.5, 0.6);
    const int L = 3;
    const oracle::FullIndex ix{L};
    const auto pec = scattering::MaterialResponse::perfect_conductor();
    double worst = 0.0;
    for (double kappa : {0.4, 1.3, 5.0}) {
      const double t = kappa * g.a;
      const auto V = oracle::translation_full(L, {0.3 * t, -0.4 * t, std::sqrt(0.75) * t});
      Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(ix.dim(), ix.dim());
      S.bottomRightCorner(ix.per_pol(), ix.per_pol()) *= -1.0;
      Eigen::VectorXcd Te(ix.dim()), Ti(ix.dim());
      for (int p = 0; p < 2; ++p) {
        for (int l = 1; l <= L; ++l) {
          for (int m = -l; m <= l; ++m) {
            const auto pol = p ? Polarization::M : Polarization::E;
            Te(ix(p, l, m)) = scattering::t_cavity(l, pol, kappa, pec);
            Ti(ix(p, l, m)) = scattering::t_inner(l, pol, kappa * g.r, pec);
          }
        }
      }
      const Eigen::MatrixXcd N = Te.asDiagonal() * (S * V.adjoint() * S) * Ti.asDiagonal() * V;
      const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(ix.dim(), ix.dim());
      double full = std::log(std::abs(Eigen::PartialPivLU<Eigen::MatrixXcd>(I - N).determinant()));
      for (int i = 0; i < ix.dim(); ++i) full -= std::log(std::abs(1.0 - Te(i) * Ti(i)));
      worst = std::max(worst, std::abs(full - energy::logdet_integrand(kappa, g, L)));
    }
    o.check(worst < 1e-11, fmt::format("block log-det sum vs full tilted matrix, l_max = 3: {:.3e}", worst));
  }
  // 3j
  {
    double worst = 0.0;
    for (int a = 0; a <= 10; ++a) {
      for (int b = 0; b <= 10; ++b) {
        for (int c = std::abs(a - b); c <= std::min(a + b, 10); ++c) {
          for (int m1 = -a; m1 <= a; ++m1) {
            for (int m2 = std::max(-b, -c - m1); m2 <= std::min(b, c - m1); ++m2) {
              worst = std::max(worst, std::abs(specfun::wigner3j(a, b, c, m1, m2, -m1 - m2) -
                                               oracle::wigner3j(a, b, c, m1, m2, -m1 - m2)));
            }
          }
        }
      }
    }
    o.check(worst < 1e-13, fmt::format("Wigner 3j vs exact rational, l <= 10: {:.3e}", worst));
  }
  // reduced vs unreduced translation
  {
    const int L = 4;
    const oracle::FullIndex ix{L};
    double worst = 0.0;
    for (double t : {0.35, -1.2, 2.0}) {
      const auto full = oracle::translation_full(L, {0.0, 0.0, t});
      for (int m = -L; m <= L; ++m) {
        const auto V = translation::v_block(m, L, t);
        for (int i = 0; i < V.dimension(); ++i) {
          for (int j = 0; j < V.dimension(); ++j) {
            const auto ci = V.channel(i), cj = V.channel(j);
            const auto ref = full(ix(ci.pol == Polarization::E ? 0 : 1, ci.l, m),
                                  ix(cj.pol == Polarization::E ? 0 : 1, cj.l, m));
            worst = std::max(worst, std::abs(ref - V.entries(i, j)));
          }
        }
      }
    }
    o.check(worst < 1e-12, fmt::format("z-aligned V vs general form, l <= 4: {:.3e}", worst));
  }
  // trace series
  {
    const Geometry g{0.2, 1.0, 0.3}, g0{0.2, 1.0, 0.0};
    bool ok = true;
    double worst_ratio = 0.0, worst_norm = 0.0;
    for (double kappa : {2.0, 4.0}) {
      for (int m : {0, 1}) {
        const auto s = oracle::trace_series(energy::round_trip_block(m, kappa, g, 5).entries, 3);
        const auto s0 = oracle::trace_series(energy::round_trip_block(m, kappa, g0, 5).entries, 3);
        const double diff = std::abs(energy::logdet_block(m, kappa, g, 5) - (s.value - s0.value).real());
        const double bound = s.remainder_bound + s0.remainder_bound;
        ok = ok && s.norm < 0.1 && diff <= bound;
        worst_ratio = std::max(worst_ratio, diff / bound);
        worst_norm = std::max(worst_norm, s.norm);
      }
    }
    o.check(ok, fmt::format("trace series to p = 3 vs log-det: |N| <= {:.3f}, worst error/bound {:.3f}", worst_norm,
                            worst_ratio));
  }
  return o;
}

Outcome monotone_and_force() {
  Outcome o;
  // E < 0 and strictly decreasing on [0.1, 0.9]
  {
    double prev = 0.0;
    bool ok = true;
    std::string worst;
    for (int k = 0; k <= 16; ++k) {
      const double x = 0.1 + 0.05 * k;
      const auto res = energy::energy_ladder(Geometry::from_ratio(0.5, x), ladder(20, 40));
      const double e = res.fit.e_inf;
      if (!(e < 0.0 && e < prev)) {
        ok = false;
        worst = fmt::format(" (violated at x = {:.2f})", x);
      }
      prev = e;
    }
    o.check(ok, "E(x) < 0 and strictly decreasing on x = 0.10, 0.15, ..., 0.90" + worst);
  }
  // F / F_fPFA along the force pipeline
  {
    const auto pts = ratio_sweep(0.5, grid(0.8, 0.025, 6), ladder(30, 70), o);
    std::vector<CurveSample> series;
    for (const auto& p : pts) series.push_back({p.x, p.ratio, p.stderr_e / std::abs(p.e_inf / p.ratio)});
    const auto forces = analysis::force_from_ratio(series, 0.5);
    std::vector<CurveSample> dev;
    bool shrinking = true;
    for (std::size_t i = 0; i < forces.size(); ++i) {
      o.details.push_back(fmt::format("     x = {:.3f}  F/F_fPFA = {:.5f}{}", forces[i].x, forces[i].ratio,
                                      forces[i].one_sided ? "  (one-sided)" : ""));
      if (i > 0) shrinking = shrinking && std::abs(forces[i].ratio - 1) < std::abs(forces[i - 1].ratio - 1);
      dev.push_back({(1 - forces[i].x), forces[i].ratio, 0.0});
    }
    // quadratic in d/(R - r) = 1 - x, evaluated at contact
    Eigen::MatrixXd A(static_cast<Eigen::Index>(dev.size()), 3);
    Eigen::VectorXd b(static_cast<Eigen::Index>(dev.size()));
    for (std::size_t i = 0; i < dev.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      A(k, 0) = 1.0;
      A(k, 1) = dev[i].x;
      A(k, 2) = dev[i].x * dev[i].x;
      b(k) = dev[i].value;
    }
    const auto fit = analysis::linear_fit(A, b, {}, {"c0", "c1", "c2"});
    o.check(shrinking, "|F/F_fPFA - 1| decreases monotonically toward contact");
    o.check(std::abs(fit.value("c0") - 1) < 0.05,
            fmt::format("quadratic extrapolation to contact: F/F_fPFA -> {:.4f} +- {:.4f}", fit.value("c0"),
                        fit.error("c0")));
  }
  return o;
}

struct Criterion {
  const char* summary;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion,-c", selected, "Criterion number (repeatable); default all")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, Criterion> criteria{
      {1, {"concentric null", concentric_null}},
      {2, {"Casimir-Polder agreement with the exact energy", cp_agreement}},
      {3, {"h1-f identity", h1_identity}},
      {4, {"full-PFA force reduces to the leading PFA force", pfa_limit}},
      {5, {"theta1 of the full PFA", theta1_fpfa}},
      {6, {"l_max = 25 adequacy at x = 0.7", lmax25}},
      {7, {"close-separation theta1_bar at r/R = 0.5", close_fit}},
      {8, {"theta1 curve consistency at y = -0.5, -0.3", theta1_curve}},
      {9, {"oracle equivalences", oracles}},
      {10, {"monotonicity, sign and force ratio near contact", monotone_and_force}},
  };
  if (selected.empty()) {
    for (const auto& [k, c] : criteria) selected.push_back(k);
  }

  int failures = 0;
  for (int k : selected) {
    const auto& c = criteria.at(k);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("criterion {}: {} {} ({:.1f} s)\n", k, out.pass ? "PASS" : "FAIL", c.summary, secs);
    for (const auto& d : out.details) fmt::print("    {}\n", d);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
