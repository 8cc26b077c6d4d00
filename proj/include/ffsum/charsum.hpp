#pragma once

#include <cfloat>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ffsum/arith.hpp"
#include "ffsum/modulus.hpp"
#include "ffsum/weights.hpp"

namespace ffsum {

struct AbsBound {
  long double value = 0;
  long double err = 0;
};

// Exact value of a character sum: counts[j] is the integer coefficient of
// zeta_p^j accumulated term by term. Two histograms represent the same
// complex number iff their canonical forms agree (coordinates modulo the
// relation 1 + zeta + ... + zeta^(p-1) = 0); magnitudes are floating with a
// rigorous error bound.
class ExpHistogram {
 public:
  explicit ExpHistogram(int p) : p_(p), c_(p, 0) {}

  int p() const { return p_; }
  const std::vector<i64>& counts() const { return c_; }

  void add(int expo, i64 w = 1) { c_[expo] += w; }
  void merge(const ExpHistogram& o) {
    for (int j = 0; j < p_; ++j) c_[j] += o.c_[j];
  }
  ExpHistogram scaled(i64 k) const {
    ExpHistogram r(p_);
    for (int j = 0; j < p_; ++j) r.c_[j] = c_[j] * k;
    return r;
  }
  friend ExpHistogram operator+(const ExpHistogram& a, const ExpHistogram& b) {
    ExpHistogram r = a;
    r.merge(b);
    return r;
  }
  friend ExpHistogram operator-(const ExpHistogram& a, const ExpHistogram& b) {
    ExpHistogram r = a;
    for (int j = 0; j < a.p_; ++j) r.c_[j] -= b.c_[j];
    return r;
  }

  bool raw_equal(const ExpHistogram& o) const { return p_ == o.p_ && c_ == o.c_; }

  // coordinates in the Z-basis 1, zeta, ..., zeta^(p-2)
  std::vector<i64> canonical() const {
    std::vector<i64> v(p_ - 1);
    for (int j = 0; j + 1 < p_; ++j) v[j] = c_[j] - c_[p_ - 1];
    return v;
  }
  bool value_equal(const ExpHistogram& o) const { return p_ == o.p_ && canonical() == o.canonical(); }
  bool is_value_zero() const {
    for (i64 v : canonical())
      if (v != 0) return false;
    return true;
  }
  bool is_integer_at_zero(i64 n) const {  // value == n as a rational integer
    auto v = canonical();
    if (v[0] != n) return false;
    for (size_t j = 1; j < v.size(); ++j)
      if (v[j] != 0) return false;
    return true;
  }

  std::complex<double> value() const {
    long double re = 0, im = 0;
    accumulate(re, im);
    return {double(re), double(im)};
  }

  AbsBound abs_bound() const {
    long double re = 0, im = 0, mass = 0;
    accumulate(re, im);
    for (i64 v : c_) mass += std::abs((long double)(v));
    AbsBound b;
    b.value = std::hypot(re, im);
    b.err = 16.0L * LDBL_EPSILON * (mass + 1.0L);
    return b;
  }
  double abs() const { return double(abs_bound().value); }

 private:
  void accumulate(long double& re, long double& im) const {
    const long double tau = 2.0L * std::numbers::pi_v<long double>;
    for (int j = 0; j < p_; ++j) {
      if (c_[j] == 0) continue;
      long double ang = tau * (long double)(j) / (long double)(p_);
      re += (long double)(c_[j]) * std::cos(ang);
      im += (long double)(c_[j]) * std::sin(ang);
    }
  }

  int p_;
  std::vector<i64> c_;
};

// Weighted analogue with Gaussian-rational coefficients per root of unity;
// exact as long as the weights are.
struct CycloRat {
  int p;
  std::vector<GaussianRational> c;

  explicit CycloRat(int p_) : p(p_), c(p_) {}
  void add(int expo, const GaussianRational& w) { c[expo] += w; }

  std::complex<double> value() const {
    const long double tau = 2.0L * std::numbers::pi_v<long double>;
    long double re = 0, im = 0;
    for (int j = 0; j < p; ++j) {
      if (c[j].is_zero()) continue;
      long double ang = tau * (long double)(j) / (long double)(p);
      long double wr = c[j].re.to_long_double(), wi = c[j].im.to_long_double();
      re += wr * std::cos(ang) - wi * std::sin(ang);
      im += wr * std::sin(ang) + wi * std::cos(ang);
    }
    return {double(re), double(im)};
  }
  double abs() const { return std::abs(value()); }
};

inline int residue_exponent(const Poly& x, const Modulus& F) { return F.residue_exponent(x); }

// sum over deg x < n of e_F(a*x); the orthogonality relation makes this
// q^n at exponent zero when deg a < r - n and exactly zero otherwise.
inline ExpHistogram linear_phase_sum(const Modulus& F, const Poly& a, int n) {
  ExpHistogram h(F.gf().p());
  CharLinearForm la(F, a);
  if (n <= F.r()) {
    u64 count = upow(u64(F.gf().q()), n);
    for (u64 i = 0; i < count; ++i) h.add(la.exponent_of_index(i));
    return h;
  }
  i64 copies = ipow(F.gf().q(), n - F.r());
  u64 states = u64(F.states());
  for (u64 i = 0; i < states; ++i) h.add(la.exponent_of_index(i));
  return h.scaled(copies);
}

// complete Kloosterman sum: sum over units x mod F of e_F(a*x + b*inv(x))
inline ExpHistogram kloosterman_complete(const Modulus& F, const Poly& a, const Poly& b) {
  ExpHistogram h(F.gf().p());
  CharLinearForm la(F, a), lb(F, b);
  int p = F.gf().p();
  for (u64 u : F.units()) {
    int e = la.exponent_of_index(u) + lb.exponent_of_index(F.inverse_index(u));
    h.add(e % p);
  }
  return h;
}

// incomplete variant: sum over deg x < n, (x, F) = 1 of e_F(b*inv(x))
inline ExpHistogram kloosterman_incomplete(const Modulus& F, const Poly& b, int n) {
  if (n > F.r()) {
    // every residue class is hit q^(n-r) times
    ExpHistogram h = kloosterman_complete(F, Poly::zero(F.field()), b);
    return h.scaled(ipow(F.gf().q(), n - F.r()));
  }
  ExpHistogram h(F.gf().p());
  CharLinearForm lb(F, b);
  u64 count = upow(u64(F.gf().q()), n);
  for (u64 i = 0; i < count; ++i) {
    if (!F.is_unit_residue(i)) continue;
    h.add(lb.exponent_of_index(F.inverse_index(i)));
  }
  return h;
}

// different-modulus variant: sum over deg x < r with (x, u*F) = 1 of e_F(b*inv(x))
inline ExpHistogram kloosterman_coprime_variant(const Modulus& F, const Poly& u, const Poly& b) {
  ExpHistogram h(F.gf().p());
  CharLinearForm lb(F, b);
  for (u64 v : F.units()) {
    Poly x = F.residue_at(v);
    bool coprime_to_u = u.is_zero() ? x.degree() == 0  // gcd(x, 0) = x
                                    : gcd(x, u).is_one();
    if (!coprime_to_u) continue;
    h.add(lb.exponent_of_index(F.inverse_index(v)));
  }
  return h;
}

// Moebius-weighted Kloosterman sum: sum over deg x < n, (x, F) = 1 of
// mu(x) e_F(a*inv(x)); exact signed histogram.
inline ExpHistogram moebius_kloosterman(const Modulus& F, const Poly& a, int n) {
  ExpHistogram h(F.gf().p());
  CharLinearForm la(F, a);
  RangeAllBelow range{F.field(), n};
  for (u64 i = 0; i < range.size(); ++i) {
    Poly x = range.at(i);
    if (x.is_zero()) continue;
    u64 res = F.residue_index(x);
    if (!F.is_unit_residue(res)) continue;
    int mu = moebius(x);
    if (mu == 0) continue;
    h.add(la.exponent_of_index(F.inverse_index(res)), mu);
  }
  return h;
}

struct BilinearValue {
  bool exact = false;
  CycloRat exact_value{3};
  std::complex<double> approx{0.0, 0.0};

  std::complex<double> value() const { return exact ? exact_value.value() : approx; }
  double abs() const { return std::abs(value()); }
};

// W_{F,a}(m, n; alpha, beta) = double sum of alpha(x1) beta(x2) e_F(a*inv(x1 x2))
// over coprime x1 (deg < m) and x2 (deg < n). The evaluator first collects the
// weighted distributions of inv(x1) and inv(x2) over unit residues, convolves
// them multiplicatively into the distribution of inv(x1 x2), and finishes with
// a single character pass over residues.
inline BilinearValue bilinear_kloosterman(const Modulus& F, const Poly& a, int m, int n,
                                          const WeightSeq& alpha, const WeightSeq& beta,
                                          const Budgets& budgets = Budgets::from_env()) {
  if (alpha.bound() != m || beta.bound() != n) fail(Errc::ConfigError, "weight range mismatch");
  if (!F.has_tables()) fail(Errc::ResourceLimit, "modulus beyond table budget");
  const auto& units = F.units();
  double pair_ops = double(units.size()) * double(units.size());
  if (pair_ops > budgets.max_brute_tuples)
    fail(Errc::ResourceLimit, "unit-pair convolution beyond budget");

  const int p = F.gf().p();
  CharLinearForm la(F, a);
  BilinearValue out;
  out.exact = alpha.is_exact() && beta.is_exact();

  auto collect_exact = [&](const WeightSeq& w, int bound) {
    std::vector<GaussianRational> dist(F.states());
    RangeAllBelow range{F.field(), bound};
    for (u64 i = 0; i < range.size(); ++i) {
      u64 res = F.residue_index(range.at(i));
      if (!F.is_unit_residue(res)) continue;
      if (w.g(i).is_zero()) continue;
      dist[F.inverse_index(res)] += w.g(i);
    }
    return dist;
  };
  auto collect_float = [&](const WeightSeq& w, int bound) {
    std::vector<std::complex<double>> dist(F.states());
    RangeAllBelow range{F.field(), bound};
    for (u64 i = 0; i < range.size(); ++i) {
      u64 res = F.residue_index(range.at(i));
      if (!F.is_unit_residue(res)) continue;
      dist[F.inverse_index(res)] += w.c(i);
    }
    return dist;
  };

  if (out.exact) {
    auto A = collect_exact(alpha, m);
    auto B = collect_exact(beta, n);
    std::vector<GaussianRational> prod(F.states());
    for (u64 v : units) {
      if (A[v].is_zero()) continue;
      for (u64 w : units) {
        if (B[w].is_zero()) continue;
        prod[F.mulmod_index(v, w)] += A[v] * B[w];
      }
    }
    out.exact_value = CycloRat(p);
    for (u64 res : units) {
      if (prod[res].is_zero()) continue;
      out.exact_value.add(la.exponent_of_index(res), prod[res]);
    }
    out.approx = out.exact_value.value();
  } else {
    auto A = collect_float(alpha, m);
    auto B = collect_float(beta, n);
    std::vector<std::complex<double>> prod(F.states());
    for (u64 v : units)
      for (u64 w : units) prod[F.mulmod_index(v, w)] += A[v] * B[w];
    const double tau = 2.0 * std::numbers::pi;
    std::complex<double> acc = 0;
    for (u64 res : units) {
      int e = la.exponent_of_index(res);
      acc += prod[res] * std::polar(1.0, tau * e / p);
    }
    out.approx = acc;
  }
  return out;
}

}  // namespace ffsum
