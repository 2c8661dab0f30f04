#include "casimir/translation.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/specfun.hpp"

namespace casimir::translation {

namespace {

void check_block(int m, int l_max) {
  if (l_max < std::max(1, std::abs(m))) {
    throw DomainError("block m = " + std::to_string(m) + " is empty for l_max = " + std::to_string(l_max));
  }
  if (2 * l_max > specfun::kMaxBesselOrder) {
    throw DomainError("l_max = " + std::to_string(l_max) + " exceeds the translation order budget");
  }
}

struct PairSums {
  double mm = 0.0;
  double b = 0.0;
};

PairSums evaluate(const TranslationTable& table, int lp, int l, const std::vector<double>& i_vals, bool flip) {
  const auto& p = table.pair(lp, l);
  const double* mm = table.mm(p);
  const double* b = table.b(p);
  PairSums s;
  for (int k = 0; k < p.count; ++k) {
    const int lpp = p.lpp_min + 2 * k;
    double v = i_vals[static_cast<std::size_t>(lpp)];
    if (flip && (lpp % 2 == 1)) v = -v;
    s.mm += mm[k] * v;
    s.b += b[k] * v;
  }
  return s;
}

}  // namespace

int BlockMatrix::l_min() const { return std::max(1, std::abs(m)); }

int BlockMatrix::index(Polarization pol, int l) const {
  const int base = pol == Polarization::E ? 0 : per_polarization();
  return base + (l - l_min());
}

ChannelIndex BlockMatrix::channel(int idx) const {
  const int n = per_polarization();
  ChannelIndex c;
  c.m = m;
  c.pol = idx < n ? Polarization::E : Polarization::M;
  c.l = l_min() + (idx % n);
  return c;
}

BlockMatrix make_block(int m, int l_max) {
  check_block(m, l_max);
  BlockMatrix out;
  out.m = m;
  out.l_max = l_max;
  out.entries = Eigen::MatrixXcd::Zero(out.dimension(), out.dimension());
  return out;
}

TranslationTable::TranslationTable(int m, int l_max)
    : m_(m), l_max_(l_max), l_min_(std::max(1, std::abs(m))), n_(l_max - std::max(1, std::abs(m)) + 1) {
  check_block(m, l_max);
  pairs_.resize(static_cast<std::size_t>(n_) * n_);
  const double m_sign = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
  for (int lp = l_min_; lp <= l_max_; ++lp) {
    for (int l = l_min_; l <= l_max_; ++l) {
      const auto w0 = specfun::wigner3j_series(l, lp, 0, 0);
      const auto wm = specfun::wigner3j_series(l, lp, m, -m);
      Pair& p = pairs_[static_cast<std::size_t>((lp - l_min_) * n_ + (l - l_min_))];
      p.offset = static_cast<int>(mm_.size());
      p.lpp_min = std::abs(l - lp);
      p.count = std::min(l, lp) + 1;
      const double ll = l * (l + 1.0);
      const double lplp = lp * (lp + 1.0);
      const double root = std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0));
      for (int k = 0; k < p.count; ++k) {
        const int lpp = p.lpp_min + 2 * k;
        const double sign = m_sign * ((lpp % 2 == 0) ? 1.0 : -1.0);
        const double w = w0.at(lpp) * wm.at(lpp);
        const double b = sign * (2.0 * lpp + 1.0) * root * w;
        b_.push_back(b);
        mm_.push_back(0.5 * (ll + lplp - lpp * (lpp + 1.0)) * b / std::sqrt(ll * lplp));
      }
    }
  }
}

double b_coefficient(int lp, int l, int m, double arg) {
  if (std::abs(m) > std::min(l, lp) || std::min(l, lp) < 1) return 0.0;
  const int l_max = std::max(l, lp);
  TranslationTable table(m, l_max);
  std::vector<double> log_i;
  specfun::log_bessel_i(l + lp, std::abs(arg), log_i);
  std::vector<double> i_vals(log_i.size());
  for (std::size_t k = 0; k < log_i.size(); ++k) i_vals[k] = std::exp(log_i[k]);
  return evaluate(table, lp, l, i_vals, arg < 0.0).b;
}

BlockMatrix v_block(int m, int l_max, double arg) {
  BlockMatrix out = make_block(m, l_max);
  const TranslationTable table(m, l_max);
  std::vector<double> log_i;
  specfun::log_bessel_i(2 * l_max, std::abs(arg), log_i);
  std::vector<double> i_vals(log_i.size());
  for (std::size_t k = 0; k < log_i.size(); ++k) i_vals[k] = std::exp(log_i[k]);
  const bool flip = arg < 0.0;

  for (int lp = out.l_min(); lp <= l_max; ++lp) {
    for (int l = out.l_min(); l <= l_max; ++l) {
      const PairSums s = evaluate(table, lp, l, i_vals, flip);
      const double norm = std::sqrt(l * (l + 1.0) * lp * (lp + 1.0));
      const std::complex<double> em(0.0, -arg * m * s.b / norm);
      out.entries(out.index(Polarization::M, lp), out.index(Polarization::M, l)) = s.mm;
      out.entries(out.index(Polarization::E, lp), out.index(Polarization::E, l)) = s.mm;
      out.entries(out.index(Polarization::E, lp), out.index(Polarization::M, l)) = em;
      out.entries(out.index(Polarization::M, lp), out.index(Polarization::E, l)) = -em;
    }
  }
  return out;
}

BlockMatrix v_ei_from_v_ie(const BlockMatrix& block) {
  BlockMatrix out = block;
  out.entries = block.entries.adjoint();
  const int n = block.per_polarization();
  // Flip sign where exactly one of row/column is an M channel.
  out.entries.topRightCorner(n, n) *= -1.0;
  out.entries.bottomLeftCorner(n, n) *= -1.0;
  return out;
}

}  // namespace casimir::translation
