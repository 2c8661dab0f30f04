#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "casimir/errors.hpp"
#include "commands.hpp"
#include "json.hpp"

namespace cli = cavity_cli;

namespace {

// JSON config reader. Objects become sections, so {"energy": {"ratio": 0.3}}
// sets `energy --ratio 0.3`. Arrays of objects (manifest outputs) are skipped.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::json j = nlohmann::json::object();
    collect(app, default_also, j);
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void walk(const nlohmann::json& j, const std::vector<std::string>& parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        walk(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        bool plain = true;
        for (const auto& v : value) plain = plain && !v.is_structured();
        if (!plain) continue;
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else if (!value.is_null()) {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static void collect(const CLI::App* app, bool default_also, nlohmann::json& j) {
    for (const CLI::Option* opt : app->get_options()) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        j[name] = opt->results().size() == 1 ? nlohmann::json(opt->results().front()) : nlohmann::json(opt->results());
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      nlohmann::json s = nlohmann::json::object();
      collect(sub, default_also, s);
      if (!s.empty()) j[sub->get_name()] = s;
    }
  }
};

void add_sweep(CLI::App* app, cli::SweepOptions& s) {
  app->add_option("--ratio", s.ratio, "Sphere-to-cavity radius ratio r/R")->capture_default_str();
  app->add_option("--x-grid", s.x_grid, "Displacement grid x = a/(R-r), start:stop:step or a list")
      ->capture_default_str();
  app->add_option("--lmax", s.lmax, "Multipole policy: auto, N, or a ladder a:b:c")->capture_default_str();
  app->add_option("--auto-tol", s.auto_tol, "Relative tolerance of the auto policy")->capture_default_str();
  app->add_option("--auto-start", s.auto_start, "First rung of the auto policy")->capture_default_str();
  app->add_option("--auto-step", s.auto_step, "Rung spacing of the auto policy")->capture_default_str();
  app->add_option("--auto-cap", s.auto_cap, "Largest l_max of the auto policy")->capture_default_str();
  app->add_option("--nodes", s.nodes, "Initial Gauss-Legendre node count")->capture_default_str();
  app->add_option("--quad-tol", s.quad_tol, "Relative tolerance of the frequency quadrature")
      ->capture_default_str();
  app->add_option("--basis", s.basis, "Full-PFA basis, r or R")->capture_default_str();
}

// Appends the manifest's command when --config is given without a subcommand,
// so that `casimir-cavity --config run.csv.manifest.json` repeats a run.
std::vector<std::string> with_config_command(int argc, char** argv, const std::vector<std::string>& subcommands) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    for (const auto& s : subcommands) {
      if (args[i] == s) return args;
    }
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (config.empty()) return args;
  std::ifstream in(config);
  if (!in) return args;
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_object() && j.contains("command") && j["command"].is_string()) args.push_back(j["command"]);
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir interaction of a sphere inside a spherical cavity"};
  app.set_version_flag("--version", CASIMIR_TOOL_VERSION);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values; flags on the command line take precedence");
  app.allow_config_extras(CLI::config_extras_mode::ignore);
  app.require_subcommand(1);

  cli::EnergyOptions energy;
  auto* e = app.add_subcommand("energy", "Energy E(x) and the ratio to the full PFA along an x grid");
  add_sweep(e, energy.sweep);
  e->add_option("--out", energy.out, "Output CSV, - for stdout")->capture_default_str();
  e->add_option("--threads", energy.threads, "Worker threads")->capture_default_str();

  cli::ForceOptions force;
  auto* f = app.add_subcommand("force", "Force ratio F/F_fPFA from an energy CSV or an inline sweep");
  add_sweep(f, force.sweep);
  f->add_option("--in", force.in, "Energy CSV from the energy command")->check(CLI::ExistingFile);
  f->add_option("--out", force.out, "Output CSV, - for stdout")->capture_default_str();
  f->add_option("--threads", force.threads, "Worker threads")->capture_default_str();

  cli::CpOptions cp;
  auto* c = app.add_subcommand("cp", "Large-separation (Casimir-Polder) energy of a small sphere");
  c->add_option("--ratio", cp.ratio, "Sphere-to-cavity radius ratio r/R")->capture_default_str();
  c->add_option("--a-over-R", cp.a_grid, "Displacement grid a/R")->capture_default_str();
  c->add_option("--order", cp.order, "Expansion order, 3 or 5")->capture_default_str();
  c->add_option("--compare-exact", cp.compare_exact, "Also compute the exact energy")->capture_default_str();
  c->add_option("--lmax", cp.lmax, "l_max of the exact energy")->capture_default_str();
  c->add_option("--l-cut", cp.l_cut, "Cap on the multipole sums of the coefficients")->capture_default_str();
  c->add_option("--out", cp.out, "Output CSV, - for stdout")->capture_default_str();
  c->add_option("--threads", cp.threads, "Worker threads")->capture_default_str();

  cli::PfaOptions pfa;
  auto* p = app.add_subcommand("pfa", "Full-PFA energy and force against the leading PFA");
  p->add_option("--y", pfa.y, "Curvature ratio y in (-1, 1]; negative for a cavity")->capture_default_str();
  p->add_option("--d-over-r", pfa.d_grid, "Separations d/r")->capture_default_str();
  p->add_option("--basis", pfa.basis, "Full-PFA basis, r or R")->capture_default_str();
  p->add_option("--R-scale", pfa.R_scale, "Length unit |R| (sphere radius when y = 0)")->capture_default_str();
  p->add_option("--out", pfa.out, "Output CSV, - for stdout")->capture_default_str();

  cli::FitOptions fit;
  auto* ft = app.add_subcommand("fit", "Close-separation fits; writes JSON");
  ft->add_option("--mode", fit.mode, "energy, force or theta1")->capture_default_str();
  ft->add_option("--in", fit.in, "Input CSV")->check(CLI::ExistingFile);
  ft->add_option("--window", fit.window, "Fit window a:b in x (energy, force) or y (theta1)");
  ft->add_option("--ratio", fit.ratio, "r/R of the input sweep")->capture_default_str();
  ft->add_option("--basis", fit.basis, "Full-PFA basis, r or R")->capture_default_str();
  ft->add_option("--theta1-fpfa", fit.theta1_fpfa, "Override the full-PFA theta1");
  ft->add_option("--out", fit.out, "Output JSON, - for stdout")->capture_default_str();

  for (auto* sub : {e, f, c, p, ft}) sub->configurable()->fallthrough();

  auto args = with_config_command(argc, argv, {"energy", "force", "cp", "pfa", "fit"});
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  cli::Manifest manifest;
  std::string out;
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (e->parsed()) {
      out = energy.out;
      code = cli::run_energy(energy, manifest);
    } else if (f->parsed()) {
      out = force.out;
      code = cli::run_force(force, manifest);
    } else if (c->parsed()) {
      out = cp.out;
      code = cli::run_cp(cp, manifest);
    } else if (p->parsed()) {
      out = pfa.out;
      code = cli::run_pfa(pfa, manifest);
    } else {
      out = fit.out;
      code = cli::run_fit(fit, manifest);
    }
    manifest.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cli::write_manifest(manifest, out);
  } catch (const casimir::DomainError& err) {
    fmt::print(stderr, "error: {}\n", err.what());
    return 2;
  } catch (const casimir::ConvergenceError& err) {
    fmt::print(stderr, "convergence failure: {}\n", err.what());
    return 3;
  } catch (const cli::IoError& err) {
    fmt::print(stderr, "i/o error: {}\n", err.what());
    return 4;
  } catch (const std::exception& err) {
    fmt::print(stderr, "error: {}\n", err.what());
    return 2;
  }
  if (code == 3) fmt::print(stderr, "convergence failure at some points; see the status column\n");
  return code;
}
