#pragma once

#include <vector>

#include "ffsum/modulus.hpp"

namespace ffsum {

namespace detail {

// Allocation-free trial division for the mu/Lambda sweeps. Buffers hold
// coefficient indices low-to-high; deg tracks the live prefix.
class FactorScratch {
 public:
  explicit FactorScratch(GfPtr f) : f_(std::move(f)), table_(irreducible_table(f_)) {}

  // If p (monic, coefficients p_c, degree dp) divides buf, replace buf by the
  // quotient and return true.
  bool try_divide(std::vector<u32>& buf, int& deg, const u32* p_c, int dp) {
    if (deg < dp) return false;
    const Gf& f = *f_;
    rem_.assign(buf.begin(), buf.begin() + deg + 1);
    quot_.assign(deg - dp + 1, 0);
    for (int i = deg; i >= dp; --i) {
      u32 c = rem_[i];
      if (c == 0) continue;
      quot_[i - dp] = c;  // p monic
      rem_[i] = 0;
      for (int j = 0; j < dp; ++j) rem_[i - dp + j] = f.sub(rem_[i - dp + j], f.mul(c, p_c[j]));
    }
    for (int j = 0; j < dp; ++j)
      if (rem_[j] != 0) return false;
    deg -= dp;
    for (int i = 0; i <= deg; ++i) buf[i] = quot_[i];
    return true;
  }

  // mu of the monic polynomial in buf (degree deg); buf is clobbered.
  int mu(std::vector<u32>& buf, int deg) {
    int k = 0;
    for (int d = 1; 2 * d <= deg; ++d) {
      for (const Poly& p : table_.of_degree(d)) {
        if (2 * d > deg) break;
        if (try_divide(buf, deg, p.coeffs().data(), d)) {
          if (try_divide(buf, deg, p.coeffs().data(), d)) return 0;
          ++k;
        }
      }
    }
    if (deg >= 1) ++k;
    return (k & 1) ? -1 : 1;
  }

  // Lambda of the monic polynomial in buf: deg P if buf = P^k, else 0.
  int lambda(std::vector<u32>& buf, int deg) {
    if (deg < 1) return 0;
    for (int d = 1; 2 * d <= deg; ++d) {
      for (const Poly& p : table_.of_degree(d)) {
        if (!try_divide(buf, deg, p.coeffs().data(), d)) continue;
        while (deg > 0)
          if (!try_divide(buf, deg, p.coeffs().data(), d)) return 0;
        return d;
      }
    }
    return deg;  // no factor up to deg/2: irreducible
  }

 private:
  GfPtr f_;
  IrreducibleTable& table_;
  std::vector<u32> rem_, quot_;
};

}  // namespace detail

// mu(x): 0 unless the unit-stripped x is squarefree, else (-1)^k for k
// distinct monic irreducible factors; units give +1.
inline int moebius(const Poly& x) {
  if (x.is_zero()) fail(Errc::ZeroPolynomial, "mu(0)");
  int deg = x.degree();
  if (deg == 0) return 1;
  if (deg > 2 * detail::kTrialDivisionMaxDegree) {
    Factorization fac = factorize(x);
    if (!fac.squarefree()) return 0;
    return (fac.omega() & 1) ? -1 : 1;
  }
  detail::FactorScratch scratch(x.field());
  std::vector<u32> buf = x.monic().coeffs();
  return scratch.mu(buf, deg);
}

// Lambda(x): deg P when the unit-stripped x is a power of the irreducible P,
// else 0.
inline int von_mangoldt(const Poly& x) {
  if (x.is_zero()) fail(Errc::ZeroPolynomial, "Lambda(0)");
  int deg = x.degree();
  if (deg == 0) return 0;
  if (deg > 2 * detail::kTrialDivisionMaxDegree) {
    Factorization fac = factorize(x);
    return fac.omega() == 1 ? fac.factors[0].first.degree() : 0;
  }
  detail::FactorScratch scratch(x.field());
  std::vector<u32> buf = x.monic().coeffs();
  return scratch.lambda(buf, deg);
}

// sum of mu over monic polynomials of degree n, by enumeration
inline i64 mertens_monic(const GfPtr& f, int n) {
  if (n < 0) fail(Errc::ConfigError, "negative degree");
  if (n == 0) return 1;
  detail::FactorScratch scratch(f);
  u64 count = upow(u64(f->q()), n);
  u64 q = u64(f->q());
  std::vector<u32> buf(n + 1);
  i64 acc = 0;
  for (u64 idx = 0; idx < count; ++idx) {
    u64 v = idx;
    for (int i = 0; i < n; ++i) { buf[i] = u32(v % q); v /= q; }
    buf[n] = 1;
    acc += scratch.mu(buf, n);
  }
  return acc;
}

// sum of Lambda over monic polynomials of degree n, by enumeration
inline i64 lambda_total(const GfPtr& f, int n) {
  if (n < 1) fail(Errc::ConfigError, "lambda_total needs n >= 1");
  detail::FactorScratch scratch(f);
  u64 count = upow(u64(f->q()), n);
  u64 q = u64(f->q());
  std::vector<u32> buf(n + 1);
  i64 acc = 0;
  for (u64 idx = 0; idx < count; ++idx) {
    u64 v = idx;
    for (int i = 0; i < n; ++i) { buf[i] = u32(v % q); v /= q; }
    buf[n] = 1;
    acc += scratch.lambda(buf, n);
  }
  return acc;
}

// sum of mu(x) over deg x < n with x == a (mod F); requires gcd(a, F) = 1.
// The zero polynomial never contributes (mu(0) is undefined).
inline i64 moebius_in_ap(int n, const Modulus& F, const Poly& a) {
  if (n < 0) fail(Errc::ConfigError, "negative degree bound");
  if (!F.coprime(a)) fail(Errc::NotCoprime, "gcd(a, F) != 1");
  Poly a0 = F.reduce(a);
  if (n <= F.r()) {
    if (!a0.is_zero() && a0.degree() < n) return moebius(a0);
    return 0;
  }
  RangeAllBelow ts{F.field(), n - F.r()};
  i64 acc = 0;
  for (u64 i = 0; i < ts.size(); ++i) {
    Poly x = a0 + F.poly() * ts.at(i);
    if (!x.is_zero()) acc += moebius(x);
  }
  return acc;
}

}  // namespace ffsum
