#pragma once

#include <cmath>
#include <string>

#include "io.hpp"

namespace cavity_cli {

struct SweepOptions {
  double ratio = 0.5;
  std::string x_grid = "0.05:0.925:0.025";
  std::string lmax = "auto";  ///< "auto", an integer, or a ladder "a:b:c"
  double auto_tol = 1e-4;
  int auto_start = 10;
  int auto_step = 5;
  int auto_cap = 80;
  int nodes = 24;
  double quad_tol = 1e-8;
  std::string basis = "r";
};

struct EnergyOptions {
  SweepOptions sweep;
  std::string out = "-";
  unsigned threads = 1;
};

struct ForceOptions {
  SweepOptions sweep;
  std::string in;
  std::string out = "-";
  unsigned threads = 1;
};

struct CpOptions {
  double ratio = 0.1;
  std::string a_grid = "0.1:0.4:0.1";
  int order = 5;
  bool compare_exact = false;
  int lmax = 15;
  int l_cut = 150;
  std::string out = "-";
  unsigned threads = 1;
};

struct PfaOptions {
  double y = -0.5;
  std::string d_grid = "0.0001,0.001,0.01,0.1";
  std::string basis = "r";
  double R_scale = 1.0;
  std::string out = "-";
};

struct FitOptions {
  std::string mode = "energy";
  std::string in;
  std::string window;
  double ratio = 0.5;
  std::string basis = "r";
  double theta1_fpfa = NAN;  ///< NaN: derive from ratio and basis
  std::string out = "-";
};

// Each returns the process exit code and fills the manifest.
int run_energy(const EnergyOptions& o, Manifest& m);
int run_force(const ForceOptions& o, Manifest& m);
int run_cp(const CpOptions& o, Manifest& m);
int run_pfa(const PfaOptions& o, Manifest& m);
int run_fit(const FitOptions& o, Manifest& m);

}  // namespace cavity_cli
