#include <cmath>
#include <complex>

#include "casimir/energy.hpp"
#include "casimir/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace casimir;
using energy::Geometry;
using scattering::MaterialResponse;
using scattering::Polarization;

namespace {

std::complex<double> complex_logdet(const Eigen::MatrixXcd& N) {
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N.rows(), N.cols());
  return std::log(Eigen::PartialPivLU<Eigen::MatrixXcd>(I - N).determinant());
}

// ln det(I - N) - sum ln(1 - T_e T_i) over every (l, m, pol) channel for a
// displacement of length a along `dir`, built from the general translation formula.
double full_matrix_integrand(double kappa, const Geometry& g, int L, std::array<double, 3> dir) {
  const auto pec = MaterialResponse::perfect_conductor();
  const oracle::FullIndex ix{L};
  const double n = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  for (auto& d : dir) d *= kappa * g.a / n;
  const auto V = oracle::translation_full(L, dir);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(ix.dim(), ix.dim());
  S.bottomRightCorner(ix.per_pol(), ix.per_pol()) *= -1.0;
  Eigen::VectorXcd Te(ix.dim()), Ti(ix.dim());
  for (int p = 0; p < 2; ++p) {
    const auto pol = p ? Polarization::M : Polarization::E;
    for (int l = 1; l <= L; ++l) {
      for (int m = -l; m <= l; ++m) {
        Te(ix(p, l, m)) = scattering::t_cavity(l, pol, kappa * g.R, pec);
        Ti(ix(p, l, m)) = scattering::t_inner(l, pol, kappa * g.r, pec);
      }
    }
  }
  const Eigen::MatrixXcd N = Te.asDiagonal() * (S * V.adjoint() * S) * Ti.asDiagonal() * V;
  double v = complex_logdet(N).real();
  for (int i = 0; i < ix.dim(); ++i) v -= std::log(std::abs(1.0 - Te(i) * Ti(i)));
  return v;
}

}  // namespace

TEST_CASE("geometry helpers") {
  const auto g = Geometry::from_ratio(0.4, 0.25);
  CHECK(g.R == 1.0);
  CHECK(g.r == doctest::Approx(0.4));
  CHECK(g.a == doctest::Approx(0.15));
  CHECK(g.x() == doctest::Approx(0.25));
  CHECK(g.gap() == doctest::Approx(0.45));
  CHECK_THROWS_AS(Geometry::from_ratio(0.5, 1.0).validate(), DomainError);
  CHECK_THROWS_AS((Geometry{1.2, 1.0, 0.0}).validate(), DomainError);
}

TEST_CASE("concentric configuration has zero energy") {
  for (double ratio : {0.1, 0.5, 0.9}) {
    const auto g = Geometry::from_ratio(ratio, 0.0);
    CHECK(energy::logdet_integrand(0.7, g, 10) == 0.0);
    CHECK(std::abs(energy::casimir_energy(g, 12)) < 1e-12);
  }
}

TEST_CASE("block sum equals the full-matrix log-det at l_max = 3, in any orientation") {
  const auto g = Geometry::from_ratio(0.5, 0.6);
  for (double kappa : {0.4, 1.3, 5.0}) {
    const double blocks = energy::logdet_integrand(kappa, g, 3);
    for (auto dir : {std::array<double, 3>{0, 0, 1}, std::array<double, 3>{0.3, -0.4, 0.866},
                     std::array<double, 3>{1, 0, 0}}) {
      CHECK(full_matrix_integrand(kappa, g, 3, dir) == doctest::Approx(blocks).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("real kernel equals the complex round-trip determinant") {
  const auto g = Geometry::from_ratio(0.5, 0.5);
  const auto g0 = Geometry::from_ratio(0.5, 0.0);
  for (int m : {0, 1, 2, 5}) {
    const double kernel = energy::logdet_block(m, 1.3, g, 6);
    const auto v = complex_logdet(energy::round_trip_block(m, 1.3, g, 6).entries) -
                   complex_logdet(energy::round_trip_block(m, 1.3, g0, 6).entries);
    CHECK(kernel == doctest::Approx(v.real()).epsilon(1e-13).scale(1.0));
    CHECK(std::abs(v.imag()) < 1e-13);
  }
}

TEST_CASE("trace series agrees with the log-det within its remainder bound") {
  // A small sphere far from the wall keeps the round trip weak.
  const auto g = Geometry{0.2, 1.0, 0.3};
  const auto g0 = Geometry{0.2, 1.0, 0.0};
  for (double kappa : {2.0, 4.0}) {
    for (int m : {0, 1}) {
      const auto N = energy::round_trip_block(m, kappa, g, 5).entries;
      const auto N0 = energy::round_trip_block(m, kappa, g0, 5).entries;
      const auto s = oracle::trace_series(N, 3);
      const auto s0 = oracle::trace_series(N0, 3);
      REQUIRE(s.norm < 0.1);
      const double lhs = energy::logdet_block(m, kappa, g, 5);
      CHECK(std::abs(lhs - (s.value - s0.value).real()) <= s.remainder_bound + s0.remainder_bound);
    }
  }
}

TEST_CASE("integrand is negative and the batch path matches") {
  const auto g = Geometry::from_ratio(0.5, 0.7);
  const std::vector<double> k{0.1, 0.9, 3.0, 12.0};
  const auto batch = energy::logdet_integrand_batch(k, g, 12);
  for (std::size_t i = 0; i < k.size(); ++i) {
    CHECK(batch[i] < 0.0);
    CHECK(batch[i] == doctest::Approx(energy::logdet_integrand(k[i], g, 12)).epsilon(1e-13));
  }
}

TEST_CASE("energy is negative, decreasing, and converged in the quadrature") {
  double prev = 0.0;
  for (double x : {0.1, 0.3, 0.5, 0.7}) {
    const auto r = energy::casimir_energy_detailed(Geometry::from_ratio(0.5, x), 12);
    CHECK(r.energy < prev);
    CHECK(std::abs(r.energy - r.coarse_estimate) <= 1e-8 * std::abs(r.energy) + 1e-15);
    prev = r.energy;
  }
}

TEST_CASE("energy regression values at r/R = 0.5, x = 0.7") {
  const auto g = Geometry::from_ratio(0.5, 0.7);
  CHECK(energy::casimir_energy(g, 25) == doctest::Approx(-1.7253125).epsilon(1e-6));
}

TEST_CASE("l_max extrapolation recovers a synthetic exponential") {
  std::vector<energy::LmaxSample> s;
  for (int l = 10; l <= 40; l += 5) s.push_back({l, -2.5 + 0.8 * std::exp(-0.21 * l)});
  const auto fit = energy::extrapolate_lmax(s);
  CHECK(fit.e_inf == doctest::Approx(-2.5).epsilon(1e-10));
  CHECK(fit.beta == doctest::Approx(0.21).epsilon(1e-8));
  CHECK(fit.alpha == doctest::Approx(-0.8).epsilon(1e-8));
  CHECK_FALSE(fit.warning);
  CHECK_THROWS_AS(energy::extrapolate_lmax({{10, -1.0}, {15, -1.1}, {20, -1.15}}), DomainError);
}

TEST_CASE("ladder and automatic policies") {
  const auto g = Geometry::from_ratio(0.5, 0.5);
  const auto lad = energy::energy_ladder(g, {8, 10, 12, 14, 16});
  REQUIRE(lad.extrapolated);
  CHECK(lad.samples.size() == 5);
  CHECK(lad.fit.e_inf <= lad.samples.back().energy);
  const auto aut = energy::energy_auto(g, 1e-5, {}, 8, 2, 30);
  CHECK(aut.converged);
  CHECK(aut.fit.e_inf == doctest::Approx(lad.fit.e_inf).epsilon(1e-4));
}
