#include <cmath>

#include "casimir/specfun.hpp"
#include "casimir/translation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace casimir;
using scattering::Polarization;

namespace {

int pol_index(Polarization p) { return p == Polarization::E ? 0 : 1; }

// Largest deviation between the low-l corners (l <= k) of two blocks.
double corner_diff(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, int n, int k) {
  double d = 0.0;
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) d = std::max(d, (A.block(p * n, q * n, k, k) - B.block(p * n, q * n, k, k)).cwiseAbs().maxCoeff());
  }
  return d;
}

}  // namespace

TEST_CASE("block layout") {
  const auto b = translation::make_block(2, 5);
  CHECK(b.l_min() == 2);
  CHECK(b.per_polarization() == 4);
  CHECK(b.dimension() == 8);
  CHECK(b.index(Polarization::M, 3) == 5);
  const auto c = b.channel(5);
  CHECK(c.l == 3);
  CHECK(c.m == 2);
  CHECK(c.pol == Polarization::M);
  CHECK(translation::make_block(0, 4).l_min() == 1);
}

TEST_CASE("z-aligned blocks equal the general translation formula for l <= 4") {
  const int L = 4;
  const oracle::FullIndex ix{L};
  for (double t : {0.35, -0.35, 2.0}) {
    const auto full = oracle::translation_full(L, {0.0, 0.0, t});
    double worst = 0.0;
    for (int m = -L; m <= L; ++m) {
      const auto V = translation::v_block(m, L, t);
      for (int i = 0; i < V.dimension(); ++i) {
        for (int j = 0; j < V.dimension(); ++j) {
          const auto ci = V.channel(i), cj = V.channel(j);
          const auto ref = full(ix(pol_index(ci.pol), ci.l, m), ix(pol_index(cj.pol), cj.l, m));
          worst = std::max(worst, std::abs(ref - V.entries(i, j)));
        }
      }
    }
    // Different m never couple for a displacement along z.
    double off = 0.0;
    for (int l = 1; l <= L; ++l) {
      for (int m = -l; m <= l; ++m) {
        for (int lp = 1; lp <= L; ++lp) {
          for (int mp = -lp; mp <= lp; ++mp) {
            if (mp != m) off = std::max(off, std::abs(full(ix(0, lp, mp), ix(1, l, m))) + std::abs(full(ix(0, lp, mp), ix(0, l, m))));
          }
        }
      }
    }
    CAPTURE(t);
    CHECK(worst < 1e-12);
    CHECK(off < 1e-13);
  }
}

TEST_CASE("zero displacement is the identity") {
  for (int m : {0, 1, 3}) {
    const auto V = translation::v_block(m, 6, 0.0);
    CHECK((V.entries - Eigen::MatrixXcd::Identity(V.dimension(), V.dimension())).norm() < 1e-15);
  }
}

TEST_CASE("translations compose and invert on the low-l corner") {
  const int L = 30, k = 4;
  for (int m : {0, 1, 3}) {
    const auto A = translation::v_block(m, L, 0.3);
    const auto B = translation::v_block(m, L, 0.5);
    const auto C = translation::v_block(m, L, 0.8);
    const auto Ai = translation::v_block(m, L, -0.3);
    const int n = A.per_polarization();
    CHECK(corner_diff(A.entries * B.entries, C.entries, n, k) < 1e-12);
    CHECK(corner_diff(A.entries * Ai.entries, Eigen::MatrixXcd::Identity(2 * n, 2 * n), n, k) < 1e-12);
  }
}

TEST_CASE("V_ei is sigma3 V_ie^dagger sigma3") {
  const auto V = translation::v_block(1, 5, 0.9);
  const auto W = translation::v_ei_from_v_ie(V);
  const int n = V.per_polarization();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
  S.bottomRightCorner(n, n) *= -1.0;
  CHECK((W.entries - S * V.entries.adjoint() * S).norm() < 1e-15);
  // The same-polarization blocks are Hermitian; the cross blocks anti-Hermitian after sigma3.
  CHECK((V.entries.topLeftCorner(n, n) - V.entries.topLeftCorner(n, n).adjoint()).norm() < 1e-14);
}

TEST_CASE("coefficient tables reproduce B") {
  const int m = 2, L = 7;
  const translation::TranslationTable table(m, L);
  const double t = 1.7;
  std::vector<double> li;
  specfun::log_bessel_i(2 * L, t, li);
  for (int lp = table.l_min(); lp <= L; ++lp) {
    for (int l = table.l_min(); l <= L; ++l) {
      const auto& p = table.pair(lp, l);
      double b = 0.0;
      for (int k = 0; k < p.count; ++k) b += table.b(p)[k] * std::exp(li[p.lpp_min + 2 * k]);
      CHECK(b == doctest::Approx(translation::b_coefficient(lp, l, m, t)).epsilon(1e-12).scale(1.0));
    }
  }
}
