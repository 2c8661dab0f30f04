#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "casimir/scattering.hpp"

namespace casimir::translation {

using scattering::Polarization;

/// Partial-wave label.
struct ChannelIndex {
  int l = 1;
  int m = 0;
  Polarization pol = Polarization::E;
};

/// Dense complex matrix over the channels of a single azimuthal index m.
/// Channel order is polarization major (E first, then M) and l minor,
/// with l running over [max(1,|m|), l_max]. Rows label the inner sphere,
/// columns the cavity.
struct BlockMatrix {
  int m = 0;
  int l_max = 1;
  Eigen::MatrixXcd entries;

  int l_min() const;
  int per_polarization() const { return l_max - l_min() + 1; }
  int dimension() const { return 2 * per_polarization(); }
  int index(Polarization pol, int l) const;
  ChannelIndex channel(int idx) const;
};

BlockMatrix make_block(int m, int l_max);

/// l''-expansion coefficients of the translation matrix for one m, reused across
/// frequencies. For row l' and column l the sum runs over
/// l'' = |l-l'|, |l-l'|+2, ..., l+l' (the 3j (l l' l''; 0 0 0) kills odd parity):
///   V_MM(l', l) = sum_k mm[k] i_{l''}(|t|) sgn(t)^{l''}
///   B(l', l)    = sum_k b[k]  i_{l''}(|t|) sgn(t)^{l''}
/// with V_EM = -i t m B / sqrt(l(l+1) l'(l'+1)).
class TranslationTable {
 public:
  TranslationTable(int m, int l_max);

  struct Pair {
    int offset = 0;
    int count = 0;
    int lpp_min = 0;
  };

  int m() const { return m_; }
  int l_max() const { return l_max_; }
  int l_min() const { return l_min_; }

  const Pair& pair(int lp, int l) const { return pairs_[static_cast<std::size_t>((lp - l_min_) * n_ + (l - l_min_))]; }
  const double* mm(const Pair& p) const { return mm_.data() + p.offset; }
  const double* b(const Pair& p) const { return b_.data() + p.offset; }

 private:
  int m_;
  int l_max_;
  int l_min_;
  int n_;
  std::vector<Pair> pairs_;
  std::vector<double> mm_;
  std::vector<double> b_;
};

/// B_{l' m, l m} for a displacement along +z (arg >= 0) or -z (arg < 0).
double b_coefficient(int lp, int l, int m, double arg);

/// V_ie restricted to azimuthal index m; arg = n_M kappa a, signed along z.
BlockMatrix v_block(int m, int l_max, double arg);

/// sigma_3 V^dagger sigma_3 with sigma_3 = +1 on E channels and -1 on M channels.
BlockMatrix v_ei_from_v_ie(const BlockMatrix& block);

}  // namespace casimir::translation
