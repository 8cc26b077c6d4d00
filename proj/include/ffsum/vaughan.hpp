#pragma once

#include <vector>

#include "ffsum/charsum.hpp"

namespace ffsum {

struct QuadrantReport {
  i64 short_short = 0, short_long = 0, long_short = 0, long_long = 0;
  int mu = 0;
  bool ok = false;
  i64 total() const { return short_short + short_long + long_short + long_long; }
};

// mu(x) = sum over monic pairs (g, h) with gh | x of mu(g) mu(h); the report
// splits the sum into the four quadrants cut at degree k. For deg x > k the
// two mixed quadrants each cancel the short-short one, which is what the
// two-term decomposition below rests on.
inline QuadrantReport quadrant_convolution_check(const Poly& x, int k) {
  if (x.is_zero()) fail(Errc::ZeroPolynomial, "quadrant check of zero");
  Poly m = x.monic();
  QuadrantReport rep;
  for (const Poly& g : monic_divisors(m)) {
    int mg = moebius(g);
    if (mg == 0) continue;
    Poly rest = m / g;
    for (const Poly& h : monic_divisors(rest)) {
      int mh = moebius(h);
      if (mh == 0) continue;
      i64 term = i64(mg) * mh;
      bool gs = g.degree() <= k, hs = h.degree() <= k;
      if (gs && hs) rep.short_short += term;
      else if (gs) rep.short_long += term;
      else if (hs) rep.long_short += term;
      else rep.long_long += term;
    }
  }
  rep.mu = moebius(m);
  rep.ok = rep.total() == rep.mu;
  return rep;
}

struct Type1Term {
  Poly w;       // monic product of two short mu-factors, coprime to F
  i64 lambda;   // sum of mu(g) mu(h) over short g, h with gh = w
  ExpHistogram inner;  // sum over deg y < n - deg w, (y, F) = 1 of e_{F0}(a0 inv(w y))
};

struct Type1Slice {
  int u = 0;  // deg w
  std::vector<Type1Term> terms;
};

struct Type2Slice {
  int v = 0;                 // degree of the long monic mu-weighted variable
  std::vector<i64> beta;     // beta_z, indexed by poly index over deg z < n - v
  i64 beta_max_abs = 0;
  ExpHistogram value{3};     // the bilinear sum of the slice
};

// Exact decomposition of the mu-weighted Kloosterman sum into short-range
// corrections, type-I slices and type-II bilinear slices. Every degree slice
// is retained, so the signed recombination reproduces the direct sum bit for
// bit (same histogram, exponent class by exponent class).
struct VaughanSplit {
  Poly a;
  int n = 0, U = 0;
  int p = 3;
  std::vector<Type1Slice> type1;
  std::vector<Type2Slice> type2;
  ExpHistogram correction{3};

  ExpHistogram recombined() const {
    ExpHistogram acc = correction;
    for (const auto& slice : type1)
      for (const auto& term : slice.terms) acc.merge(term.inner.scaled(-term.lambda));
    for (const auto& slice : type2) acc.merge(slice.value);
    return acc;
  }
};

inline VaughanSplit vaughan_decompose(const Modulus& F, const Poly& a, int n, int U,
                                      const Budgets& budgets = Budgets::from_env()) {
  if (U < 1 || 2 * U >= n) fail(Errc::BadCutoff, "need a positive cutoff with 2U < n");
  if (!F.has_tables()) fail(Errc::ResourceLimit, "modulus beyond table budget");
  const GfPtr& f = F.field();
  const int p = F.gf().p();

  ModReduction red = reduce_modulus(a, F, budgets);
  const Modulus& F0 = *red.F0;
  CharLinearForm la0(F0, red.a0);
  auto expo_of = [&](const Poly& x) {
    u64 r0 = F0.residue_index(x);
    return la0.exponent_of_index(F0.inverse_index(r0));
  };

  VaughanSplit split;
  split.a = a;
  split.n = n;
  split.U = U;
  split.p = p;
  split.correction = ExpHistogram(p);

  // direct boundary: deg x <= U
  {
    RangeAllBelow range{f, U + 1};
    for (u64 i = 0; i < range.size(); ++i) {
      Poly x = range.at(i);
      if (x.is_zero() || !F.coprime(x)) continue;
      int mu = moebius(x);
      if (mu != 0) split.correction.add(expo_of(x), mu);
    }
  }

  // type I: w = gh with both factors short; slices by deg w
  for (int u = 0; u <= 2 * U; ++u) {
    Type1Slice slice;
    slice.u = u;
    RangeMonic ws{f, u};
    for (u64 wi = 0; wi < ws.size(); ++wi) {
      Poly w = ws.at(wi);
      if (!F.coprime(w)) continue;
      i64 lambda = 0;
      for (const Poly& g : monic_divisors(w)) {
        if (g.degree() > U || w.degree() - g.degree() > U) continue;
        int mg = moebius(g);
        if (mg == 0) continue;
        lambda += i64(mg) * moebius(w / g);
      }
      if (lambda == 0) continue;
      Type1Term term{w, lambda, ExpHistogram(p)};
      RangeAllBelow ys{f, n - u};
      for (u64 yi = 0; yi < ys.size(); ++yi) {
        Poly y = ys.at(yi);
        if (y.is_zero() || !F.coprime(y)) continue;
        int e = expo_of(w * y);
        term.inner.add(e);
        // the deg(w y) <= U part belongs to the boundary, not the slice
        if (u + y.degree() <= U) split.correction.add(e, lambda);
      }
      slice.terms.push_back(std::move(term));
    }
    if (!slice.terms.empty()) split.type1.push_back(std::move(slice));
  }

  // type II: bilinear slices with the monic mu-variable of degree v > U and
  // the companion variable carrying beta_z = sum of mu over long divisors
  for (int v = U + 1; v < n - U; ++v) {
    Type2Slice slice;
    slice.v = v;
    int zlen = n - v;
    RangeAllBelow zs{f, zlen};
    slice.beta.assign(zs.size(), 0);
    for (u64 zi = 0; zi < zs.size(); ++zi) {
      Poly z = zs.at(zi);
      if (z.is_zero() || z.degree() <= U) continue;
      i64 b = 0;
      for (const Poly& h : monic_divisors(z))
        if (h.degree() > U) b += moebius(h);
      slice.beta[zi] = b;
      slice.beta_max_abs = std::max(slice.beta_max_abs, b < 0 ? -b : b);
    }
    slice.value = ExpHistogram(p);
    RangeMonic gs{f, v};
    for (u64 gi = 0; gi < gs.size(); ++gi) {
      Poly g = gs.at(gi);
      if (!F.coprime(g)) continue;
      int mg = moebius(g);
      if (mg == 0) continue;
      for (u64 zi = 0; zi < zs.size(); ++zi) {
        if (slice.beta[zi] == 0) continue;
        Poly z = zs.at(zi);
        if (!F.coprime(z)) continue;
        slice.value.add(expo_of(g * z), i64(mg) * slice.beta[zi]);
      }
    }
    split.type2.push_back(std::move(slice));
  }
  return split;
}

struct SplitBoundReport {
  double direct_abs = 0;
  double s1_abs = 0;  // sum over slices and short w of |lambda_w| |inner_w|
  double s2_abs = 0;  // sum over slices and long monic g of |inner_g|
  double constant = 0;
  bool constant_finite = true;
};

inline SplitBoundReport split_bound_report(const Modulus& F, const VaughanSplit& split) {
  SplitBoundReport rep;
  rep.direct_abs = moebius_kloosterman(F, split.a, split.n).abs();
  for (const auto& slice : split.type1)
    for (const auto& term : slice.terms)
      rep.s1_abs += double(term.lambda < 0 ? -term.lambda : term.lambda) * term.inner.abs();

  ModReduction red = reduce_modulus(split.a, F);
  const Modulus& F0 = *red.F0;
  CharLinearForm la0(F0, red.a0);
  const GfPtr& f = F.field();
  for (const auto& slice : split.type2) {
    RangeMonic gs{f, slice.v};
    RangeAllBelow zs{f, split.n - slice.v};
    for (u64 gi = 0; gi < gs.size(); ++gi) {
      Poly g = gs.at(gi);
      if (!F.coprime(g) || moebius(g) == 0) continue;
      ExpHistogram inner(split.p);
      for (u64 zi = 0; zi < zs.size(); ++zi) {
        if (slice.beta[zi] == 0) continue;
        Poly z = zs.at(zi);
        if (!F.coprime(z)) continue;
        Poly x = g * z;
        inner.add(la0.exponent_of_index(F0.inverse_index(F0.residue_index(x))), slice.beta[zi]);
      }
      rep.s2_abs += inner.abs();
    }
  }
  double denom = rep.s1_abs + rep.s2_abs;
  if (denom > 1e-12) {
    rep.constant = rep.direct_abs / denom;
  } else if (rep.direct_abs <= 1e-12) {
    rep.constant = 0;
  } else {
    rep.constant_finite = false;
  }
  return rep;
}

}  // namespace ffsum
