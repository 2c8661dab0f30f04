#include "commands.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "casimir/analysis.hpp"
#include "casimir/cp.hpp"
#include "casimir/energy.hpp"
#include "casimir/errors.hpp"
#include "casimir/pfa.hpp"
#include "sweep.hpp"

namespace cavity_cli {

using casimir::ConvergenceError;
using casimir::DomainError;
namespace en = casimir::energy;
namespace pf = casimir::pfa;
namespace an = casimir::analysis;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const char* kUnits = "units: lengths in R, energies in hbar*c/R, forces in hbar*c/R^2";

pf::Basis parse_basis(const std::string& b) {
  if (b == "r") return pf::Basis::r_based;
  if (b == "R") return pf::Basis::R_based;
  throw DomainError("basis must be 'r' or 'R'");
}

nlohmann::json sweep_json(const SweepOptions& s) {
  return {{"ratio", s.ratio},       {"x-grid", s.x_grid},         {"lmax", s.lmax},
          {"auto-tol", s.auto_tol}, {"auto-start", s.auto_start}, {"auto-step", s.auto_step},
          {"auto-cap", s.auto_cap}, {"nodes", s.nodes},           {"quad-tol", s.quad_tol},
          {"basis", s.basis}};
}

// Full-PFA energy and force of the interior geometry at x.
pf::FullPfa interior_fpfa(double ratio, double x, pf::Basis basis) {
  pf::PfaConfig cfg;
  cfg.y = -ratio;
  cfg.d_over_r = (1.0 - ratio) * (1.0 - x) / ratio;
  cfg.basis = basis;
  return pf::full_pfa(cfg, 1.0);
}

struct EnergyRow {
  double x = 0.0, energy = kNaN, fpfa = kNaN, ratio = kNaN;
  int lmax = 0, nodes = 0;
  double stderr_e = 0.0;
  std::string status = "ok";
};

EnergyRow energy_row(const SweepOptions& s, double x) {
  EnergyRow row;
  row.x = x;
  const auto geom = en::Geometry::from_ratio(s.ratio, x);
  const pf::Basis basis = parse_basis(s.basis);
  en::QuadratureSpec quad;
  quad.nodes = s.nodes;
  quad.rel_tol = s.quad_tol;
  try {
    if (x == 0.0) {
      row.energy = 0.0;
      row.fpfa = 0.0;
    } else {
      row.fpfa = interior_fpfa(s.ratio, x, basis).energy;
      if (s.lmax == "auto") {
        const auto res = en::energy_auto(geom, s.auto_tol, quad, s.auto_start, s.auto_step, s.auto_cap);
        row.energy = res.fit.e_inf;
        row.lmax = res.samples.back().l_max;
        row.nodes = res.quad_nodes;
        row.stderr_e = res.extrapolated ? res.fit.e_inf_stderr : 0.0;
        if (!res.converged) row.status = "not_converged";
        else if (res.fit.warning) row.status = "warning: " + res.fit.diagnostics;
      } else if (s.lmax.find(':') != std::string::npos) {
        const auto res = en::energy_ladder(geom, parse_int_range(s.lmax), quad);
        row.energy = res.fit.e_inf;
        row.lmax = res.samples.back().l_max;
        row.nodes = res.quad_nodes;
        row.stderr_e = res.fit.e_inf_stderr;
        if (res.fit.warning) row.status = "warning: " + res.fit.diagnostics;
      } else {
        const int l = parse_int_range(s.lmax).front();
        const auto res = en::casimir_energy_detailed(geom, l, quad);
        row.energy = res.energy;
        row.lmax = l;
        row.nodes = res.nodes;
      }
    }
    row.ratio = row.energy / row.fpfa;
  } catch (const ConvergenceError& e) {
    row.status = std::string("convergence_error: ") + e.what();
  } catch (const casimir::NumericalRangeError& e) {
    row.status = std::string("range_error: ") + e.what();
  }
  // Commas would break the CSV row.
  for (char& c : row.status) {
    if (c == ',') c = ';';
  }
  return row;
}

std::vector<EnergyRow> energy_sweep(const SweepOptions& s, unsigned threads) {
  if (!(s.ratio > 0.0 && s.ratio < 1.0)) throw DomainError("--ratio must lie in (0, 1)");
  const auto grid = parse_grid(s.x_grid);
  for (double x : grid) {
    if (!(x >= 0.0 && x < 1.0)) throw DomainError("x must lie in [0, 1)");
  }
  parse_basis(s.basis);
  return parallel_map<EnergyRow>(grid.size(), threads, [&](std::size_t i) { return energy_row(s, grid[i]); });
}

void finish(const std::string& out, const std::string& text, Manifest& m) {
  write_text(out, text);
  if (out != "-") m.digests[out] = sha256_hex(text);
}

}  // namespace

int run_energy(const EnergyOptions& o, Manifest& m) {
  m.command = "energy";
  m.parameters = sweep_json(o.sweep);
  m.parameters["out"] = o.out;
  m.parameters["threads"] = o.threads;
  const auto rows = energy_sweep(o.sweep, o.threads);

  CsvTable t;
  t.comments = {kUnits, "r/R = " + number(o.sweep.ratio) + ", full PFA basis " + o.sweep.basis};
  t.header = {"x", "E", "E_fPFA", "R", "lmax_used", "quad_nodes", "extrapolation_stderr", "status"};
  bool failed = false;
  for (const auto& r : rows) {
    t.rows.push_back({number(r.x), number(r.energy), number(r.fpfa), number(r.ratio), std::to_string(r.lmax),
                      std::to_string(r.nodes), number(r.stderr_e), r.status});
    failed = failed || r.status.rfind("convergence_error", 0) == 0 || r.status.rfind("range_error", 0) == 0;
  }
  finish(o.out, t.render(), m);
  return failed ? 3 : 0;
}

int run_force(const ForceOptions& o, Manifest& m) {
  m.command = "force";
  m.parameters = sweep_json(o.sweep);
  m.parameters["in"] = o.in;
  m.parameters["out"] = o.out;
  m.parameters["threads"] = o.threads;
  const double ratio = o.sweep.ratio;
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("--ratio must lie in (0, 1)");
  const pf::Basis basis = parse_basis(o.sweep.basis);

  std::vector<an::CurveSample> series;
  bool failed = false;
  if (!o.in.empty()) {
    const CsvTable in = read_csv(o.in);
    const bool has_err = in.column("extrapolation_stderr") && in.column("E_fPFA");
    for (std::size_t i = 0; i < in.rows.size(); ++i) {
      an::CurveSample s{in.number_at(i, "x"), in.number_at(i, "R"), 0.0};
      if (has_err) s.error = std::abs(in.number_at(i, "extrapolation_stderr") / in.number_at(i, "E_fPFA"));
      series.push_back(s);
    }
  } else {
    for (const auto& r : energy_sweep(o.sweep, o.threads)) {
      series.push_back({r.x, r.ratio, std::abs(r.stderr_e / r.fpfa)});
      failed = failed || !std::isfinite(r.ratio);
    }
  }
  for (const auto& s : series) failed = failed || !std::isfinite(s.value);

  CsvTable t;
  t.comments = {kUnits, "r/R = " + number(ratio) + ", full PFA basis " + o.sweep.basis};
  t.header = {"x", "F_over_F_fPFA", "F", "F_fPFA", "ratio_stderr", "one_sided"};
  if (failed) {
    t.header.push_back("status");
    for (const auto& s : series) {
      t.rows.push_back({number(s.x), "nan", "nan", "nan", "nan", "0",
                        std::isfinite(s.value) ? "ok" : "energy_failed"});
    }
    finish(o.out, t.render(), m);
    return 3;
  }
  const auto forces = an::force_from_ratio(series, ratio, basis);
  for (const auto& f : forces) {
    t.rows.push_back({number(f.x), number(f.ratio), number(f.force), number(f.force / f.ratio), number(f.error),
                      f.one_sided ? "1" : "0"});
  }
  finish(o.out, t.render(), m);
  return 0;
}

int run_cp(const CpOptions& o, Manifest& m) {
  m.command = "cp";
  m.parameters = {{"ratio", o.ratio}, {"a-over-R", o.a_grid}, {"order", o.order},   {"compare-exact", o.compare_exact},
                  {"lmax", o.lmax},   {"l-cut", o.l_cut},     {"out", o.out},       {"threads", o.threads}};
  if (!(o.ratio > 0.0 && o.ratio < 1.0)) throw DomainError("--ratio must lie in (0, 1)");
  if (o.order != 3 && o.order != 5) throw DomainError("--order must be 3 or 5");
  const auto grid = parse_grid(o.a_grid);
  for (double a : grid) {
    if (!(a >= 0.0 && a < 1.0)) throw DomainError("a/R must lie in [0, 1)");
    if (o.compare_exact && a >= 1.0 - o.ratio) throw DomainError("a/R must be below 1 - r/R for the exact energy");
  }
  const auto pols = casimir::scattering::pec_polarizabilities(o.ratio, 2);

  struct Row {
    double a = 0.0, ecp = kNaN, exact = kNaN, err = kNaN;
    std::string status = "ok";
  };
  const auto rows = parallel_map<Row>(grid.size(), o.threads, [&](std::size_t i) {
    Row r;
    r.a = grid[i];
    try {
      r.ecp = casimir::cp::cp_energy_spherical(casimir::cp::cp_coefficients(r.a, o.l_cut), pols, 1.0, o.order);
      if (o.compare_exact) {
        r.exact = en::casimir_energy(en::Geometry{o.ratio, 1.0, r.a}, o.lmax);
        r.err = 100.0 * (r.exact - r.ecp) / r.exact;
      }
    } catch (const ConvergenceError& e) {
      r.status = std::string("convergence_error: ") + e.what();
    }
    for (char& c : r.status) {
      if (c == ',') c = ';';
    }
    return r;
  });

  CsvTable t;
  t.comments = {kUnits, "PEC sphere r/R = " + number(o.ratio)};
  t.header = {"a_over_R", "E_CP", "E_exact", "fractional_error_pct", "order", "status"};
  bool failed = false;
  for (const auto& r : rows) {
    t.rows.push_back({number(r.a), number(r.ecp), number(r.exact), number(r.err), std::to_string(o.order), r.status});
    failed = failed || r.status != "ok";
  }
  finish(o.out, t.render(), m);
  return failed ? 3 : 0;
}

int run_pfa(const PfaOptions& o, Manifest& m) {
  m.command = "pfa";
  m.parameters = {{"y", o.y}, {"d-over-r", o.d_grid}, {"basis", o.basis}, {"R-scale", o.R_scale}, {"out", o.out}};
  const pf::Basis basis = parse_basis(o.basis);
  if (!(o.R_scale > 0.0)) throw DomainError("--R-scale must be positive");
  const double r_len = o.y == 0.0 ? o.R_scale : std::abs(o.y) * o.R_scale;
  const double R_signed = o.y == 0.0 ? HUGE_VAL : (o.y < 0.0 ? -o.R_scale : o.R_scale);

  CsvTable t;
  t.comments = {"units: lengths in R_scale (sphere radius for y = 0), energies in hbar*c/length, forces in "
                "hbar*c/length^2",
                "y = " + number(o.y) + ", basis " + o.basis};
  t.header = {"d_over_r", "E_fPFA", "F_fPFA", "E_leading", "F_leading", "theta1_estimate"};
  for (double u : parse_grid(o.d_grid)) {
    const auto full = pf::full_pfa({o.y, u, basis}, o.R_scale);
    const double d = u * r_len;
    const double el = pf::pfa_energy_limit(d, r_len, R_signed);
    const double fl = pf::pfa_force_limit(d, r_len, R_signed);
    t.rows.push_back({number(u), number(full.energy), number(full.force), number(el), number(fl),
                      number((full.energy / el - 1.0) / u)});
  }
  finish(o.out, t.render(), m);
  return 0;
}

int run_fit(const FitOptions& o, Manifest& m) {
  m.command = "fit";
  m.parameters = {{"mode", o.mode},   {"in", o.in},       {"window", o.window},
                  {"ratio", o.ratio}, {"basis", o.basis}, {"out", o.out}};
  if (std::isfinite(o.theta1_fpfa)) m.parameters["theta1-fpfa"] = o.theta1_fpfa;
  if (o.in.empty()) throw DomainError("--in is required");
  const CsvTable in = read_csv(o.in);
  const pf::Basis basis = parse_basis(o.basis);

  std::optional<std::pair<double, double>> window;
  if (!o.window.empty()) {
    const auto pos = o.window.find(':');
    if (pos == std::string::npos) throw DomainError("--window must be a:b");
    window = std::make_pair(std::stod(o.window.substr(0, pos)), std::stod(o.window.substr(pos + 1)));
  }
  auto pick = [&](const char* a, const char* b) -> std::string {
    if (in.column(a)) return a;
    if (in.column(b)) return b;
    throw DomainError(std::string("input needs a '") + a + "' or '" + b + "' column");
  };

  std::vector<an::CurveSample> pts;
  double tf = kNaN;
  if (o.mode == "theta1") {
    const std::string vcol = pick("theta1", "value");
    for (std::size_t i = 0; i < in.rows.size(); ++i) {
      const double y = in.number_at(i, "y");
      if (window && (y < window->first || y > window->second)) continue;
      pts.push_back({y, in.number_at(i, vcol), in.column("error") ? in.number_at(i, "error") : 0.0});
    }
  } else if (o.mode == "energy" || o.mode == "force") {
    if (!(o.ratio > 0.0 && o.ratio < 1.0)) throw DomainError("--ratio must lie in (0, 1)");
    tf = std::isfinite(o.theta1_fpfa) ? o.theta1_fpfa : pf::theta1_fpfa(-o.ratio, basis);
    const std::string vcol = o.mode == "energy" ? pick("R", "value") : pick("F_over_F_fPFA", "value");
    const bool has_x = in.column("x").has_value();
    for (std::size_t i = 0; i < in.rows.size(); ++i) {
      const double u = has_x ? (1.0 - o.ratio) * (1.0 - in.number_at(i, "x")) / o.ratio : in.number_at(i, "d_over_r");
      const double w = has_x ? in.number_at(i, "x") : u;
      if (window && (w < window->first || w > window->second)) continue;
      double err = 0.0;
      if (in.column("error")) err = in.number_at(i, "error");
      else if (in.column("ratio_stderr")) err = in.number_at(i, "ratio_stderr");
      else if (in.column("extrapolation_stderr") && in.column("E_fPFA"))
        err = std::abs(in.number_at(i, "extrapolation_stderr") / in.number_at(i, "E_fPFA"));
      pts.push_back({u, in.number_at(i, vcol), err});
    }
  } else {
    throw DomainError("--mode must be energy, force or theta1");
  }

  const an::FitResult fit = o.mode == "theta1"   ? an::fit_theta1_curve(pts)
                            : o.mode == "energy" ? an::fit_energy_ansatz(pts)
                                                 : an::fit_force_ansatz(pts, tf);
  nlohmann::json j;
  j["mode"] = o.mode;
  j["points"] = pts.size();
  for (std::size_t k = 0; k < fit.names.size(); ++k) {
    j["parameters"][fit.names[k]] = {{"value", fit.values[k]}, {"stderr", fit.errors[k]}};
  }
  nlohmann::json cov = nlohmann::json::array();
  for (Eigen::Index r = 0; r < fit.covariance.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < fit.covariance.cols(); ++c) row.push_back(fit.covariance(r, c));
    cov.push_back(row);
  }
  j["covariance"] = cov;
  j["residuals"] = fit.residuals;
  j["residual_rms"] = fit.residual_rms;
  j["chi2"] = fit.chi2;
  j["dof"] = fit.dof;
  if (o.mode != "theta1") {
    j["theta1_fpfa"] = tf;
    j["theta1"] = fit.values[0] + tf;
    j["theta1_stderr"] = fit.errors[0];
  }
  finish(o.out, j.dump(2) + "\n", m);
  return 0;
}

}  // namespace cavity_cli
