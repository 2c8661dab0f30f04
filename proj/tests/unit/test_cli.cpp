#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "casimir/errors.hpp"
#include "commands.hpp"
#include "doctest.h"
#include "io.hpp"
#include "sweep.hpp"

namespace fs = std::filesystem;
using namespace cavity_cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("casimir-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0.05:0.925:0.025").size() == 36);
  CHECK(parse_grid("0:0:1") == std::vector<double>{0.0});
  CHECK(parse_grid("0.1,0.3") == std::vector<double>{0.1, 0.3});
  CHECK(parse_int_range("20:45:5") == std::vector<int>{20, 25, 30, 35, 40, 45});
  CHECK(parse_int_range("15") == std::vector<int>{15});
  CHECK_THROWS_AS(parse_grid("1:0:0.1"), casimir::DomainError);
  CHECK_THROWS_AS(parse_grid("a,b"), casimir::DomainError);
  CHECK_THROWS_AS(parse_int_range("1.5"), casimir::DomainError);
}

TEST_CASE("worker pool keeps input order and forwards exceptions") {
  const auto v = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_map<int>(8, 3,
                                    [](std::size_t i) -> int {
                                      if (i == 5) throw std::runtime_error("boom");
                                      return 0;
                                    }),
                  std::runtime_error);
}

TEST_CASE("number formatting and digests") {
  CHECK(number(0.1) == "0.10000000000000001");
  CHECK(number(-2.0) == "-2");
  CHECK(number(NAN) == "nan");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("CSV round trip") {
  TempDir tmp;
  CsvTable t;
  t.comments = {"units: none"};
  t.header = {"x", "y"};
  t.rows = {{"1", "2.5"}, {"3", "nan"}};
  write_text(tmp.file("t.csv"), t.render());
  const auto r = read_csv(tmp.file("t.csv"));
  CHECK(r.header == t.header);
  CHECK(r.number_at(0, "y") == 2.5);
  CHECK(std::isnan(r.number_at(1, "y")));
  CHECK_FALSE(r.column("z").has_value());
  CHECK_THROWS_AS(read_csv(tmp.file("missing.csv")), IoError);
}

TEST_CASE("pfa command: theta1 column and manifest") {
  TempDir tmp;
  PfaOptions o;
  o.out = tmp.file("pfa.csv");
  Manifest m;
  CHECK(run_pfa(o, m) == 0);
  write_manifest(m, o.out);
  const auto t = read_csv(o.out);
  CHECK(t.number_at(0, "theta1_estimate") == doctest::Approx(-1.5).epsilon(1e-2));
  const auto j = nlohmann::json::parse(slurp(o.out + ".manifest.json"));
  CHECK(j["command"] == "pfa");
  CHECK(j["pfa"]["y"] == -0.5);
  CHECK(j["outputs"][0]["sha256"] == sha256_hex(slurp(o.out)));
}

TEST_CASE("energy command: concentric row and fixed l_max") {
  TempDir tmp;
  EnergyOptions o;
  o.sweep.x_grid = "0:0:1";
  o.out = tmp.file("e0.csv");
  Manifest m;
  CHECK(run_energy(o, m) == 0);
  auto t = read_csv(o.out);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.number_at(0, "E") == 0.0);

  o.sweep.ratio = 0.05;
  o.sweep.x_grid = "0.2:0.2:1";
  o.sweep.lmax = "10";
  o.out = tmp.file("e1.csv");
  CHECK(run_energy(o, m) == 0);
  t = read_csv(o.out);
  const double e = t.number_at(0, "E");
  CHECK(t.number_at(0, "lmax_used") == 10);

  // the same point as a/R = 0.19 through the large-separation expansion
  CpOptions c;
  c.ratio = 0.05;
  c.a_grid = "0.19";
  c.out = tmp.file("cp.csv");
  CHECK(run_cp(c, m) == 0);
  CHECK(read_csv(c.out).number_at(0, "E_CP") == doctest::Approx(e).epsilon(0.01));
}

TEST_CASE("energy command rejects bad geometry") {
  EnergyOptions o;
  o.sweep.ratio = 1.5;
  Manifest m;
  CHECK_THROWS_AS(run_energy(o, m), casimir::DomainError);
  o.sweep.ratio = 0.5;
  o.sweep.basis = "q";
  CHECK_THROWS_AS(run_energy(o, m), casimir::DomainError);
}

TEST_CASE("cp command: zero displacement and order comparison") {
  TempDir tmp;
  CpOptions c;
  c.ratio = 0.2;
  c.a_grid = "0,0.3";
  c.compare_exact = true;
  c.order = 3;
  c.out = tmp.file("o3.csv");
  Manifest m;
  CHECK(run_cp(c, m) == 0);
  c.order = 5;
  c.out = tmp.file("o5.csv");
  CHECK(run_cp(c, m) == 0);
  const auto t3 = read_csv(tmp.file("o3.csv")), t5 = read_csv(tmp.file("o5.csv"));
  CHECK(t5.number_at(0, "E_CP") == 0.0);
  CHECK(std::abs(t5.number_at(1, "fractional_error_pct")) < std::abs(t3.number_at(1, "fractional_error_pct")));
}

TEST_CASE("force and fit commands on synthetic data") {
  TempDir tmp;
  // R(x) with a known close-separation expansion at r/R = 0.5 (u = 1 - x).
  CsvTable e;
  e.header = {"x", "R"};
  for (int i = 0; i < 6; ++i) {
    const double x = 0.85 + 0.01 * i, u = 1 - x;
    e.rows.push_back({number(x), number(1 + 1.77 * u + 2.1 * u * u * std::log(u))});
  }
  write_text(tmp.file("e.csv"), e.render());

  FitOptions f;
  f.in = tmp.file("e.csv");
  f.out = tmp.file("fit.json");
  Manifest m;
  CHECK(run_fit(f, m) == 0);
  const auto j = nlohmann::json::parse(slurp(f.out));
  CHECK(j["parameters"]["theta1_bar"]["value"].get<double>() == doctest::Approx(1.77).epsilon(1e-10));
  CHECK(j["theta1"].get<double>() == doctest::Approx(0.27).epsilon(1e-9));

  ForceOptions fo;
  fo.in = tmp.file("e.csv");
  fo.out = tmp.file("f.csv");
  CHECK(run_force(fo, m) == 0);
  const auto ft = read_csv(fo.out);
  CHECK(ft.rows.size() == 6);
  CHECK(ft.number_at(0, "one_sided") == 1);
  CHECK(ft.number_at(2, "one_sided") == 0);

  f.mode = "bogus";
  CHECK_THROWS_AS(run_fit(f, m), casimir::DomainError);
}
