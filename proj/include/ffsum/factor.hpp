#pragma once

#include <atomic>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <vector>

#include "ffsum/poly.hpp"

namespace ffsum {

struct Factorization {
  u32 unit = 1;                          // leading coefficient of the input
  std::vector<std::pair<Poly, int>> factors;  // monic irreducible, multiplicity; sorted

  Poly reassemble(const GfPtr& f) const {
    Poly r = Poly::constant(f, unit);
    for (const auto& [p, e] : factors)
      for (int i = 0; i < e; ++i) r = r * p;
    return r;
  }
  int omega() const { return int(factors.size()); }
  bool squarefree() const {
    for (const auto& [p, e] : factors)
      if (e > 1) return false;
    return true;
  }
};

namespace detail {

// Sieve-backed table of monic irreducibles, grown degree by degree and cached
// per field context for the lifetime of the process. Levels live in a deque,
// so references handed out stay valid while the table grows.
class IrreducibleTable {
 public:
  explicit IrreducibleTable(GfPtr f) : f_(std::move(f)) {}

  void ensure(int d) {
    std::lock_guard<std::mutex> lock(mu_);
    while (int(by_degree_.size()) < d) grow();
    int have = levels_.load(std::memory_order_relaxed);
    if (have < d) levels_.store(d, std::memory_order_release);
  }

  // all monic irreducibles of degree exactly d, ascending index order
  const std::vector<Poly>& of_degree(int d) {
    if (levels_.load(std::memory_order_acquire) < d) ensure(d);
    return by_degree_[d - 1];
  }

 private:
  void grow() {
    int d = int(by_degree_.size()) + 1;
    std::vector<Poly> found;
    RangeMonic range{f_, d};
    for (u64 i = 0; i < range.size(); ++i) {
      Poly cand = range.at(i);
      bool irred = true;
      for (int dd = 1; dd <= d / 2 && irred; ++dd)
        for (const Poly& p : by_degree_[dd - 1]) {
          if ((cand % p).is_zero()) { irred = false; break; }
        }
      if (irred) found.push_back(std::move(cand));
    }
    by_degree_.push_back(std::move(found));
  }

  GfPtr f_;
  std::mutex mu_;
  std::atomic<int> levels_{0};
  std::deque<std::vector<Poly>> by_degree_;
};

inline IrreducibleTable& irreducible_table(const GfPtr& f) {
  static std::mutex mu;
  static std::map<const Gf*, std::unique_ptr<IrreducibleTable>> registry;
  static std::vector<GfPtr> keepalive;
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find(f.get());
  if (it == registry.end()) {
    keepalive.push_back(f);
    it = registry.emplace(f.get(), std::make_unique<IrreducibleTable>(f)).first;
  }
  return *it->second;
}

inline constexpr int kTrialDivisionMaxDegree = 6;

inline Factorization factorize_large(Poly f, u64 salt);

// Frobenius preimage: g with g(T)^p == f(T^...), valid when f = sum a_i T^(p i).
inline Poly frobenius_root(const Poly& f) {
  const Gf& gf = f.gf();
  int p = gf.p();
  std::vector<u32> out((f.degree() / p) + 1, 0);
  for (int i = 0; i <= f.degree(); ++i) {
    u32 c = f.coeff(i);
    if (c == 0) continue;
    if (i % p != 0) fail(Errc::InvariantViolation, "not a p-th power");
    out[i / p] = gf.pow(c, ipow(gf.p(), gf.ell() - 1));  // c^(q/p), the p-th root in F_q
  }
  return Poly(f.field(), std::move(out));
}

inline Poly derivative(const Poly& f) {
  if (f.degree() < 1) return Poly::zero(f.field());
  const Gf& gf = f.gf();
  std::vector<u32> out(f.degree(), 0);
  for (int i = 1; i <= f.degree(); ++i) {
    u32 m = u32(i % gf.p());
    u32 c = f.coeff(i);
    u32 s = 0;
    for (u32 j = 0; j < m; ++j) s = gf.add(s, c);
    out[i - 1] = s;
  }
  return Poly(f.field(), std::move(out));
}

inline Poly powmod(Poly base, u64 e, const Poly& mod) {
  Poly r = Poly::one(base.field());
  base = base % mod;
  while (e > 0) {
    if (e & 1) r = (r * base) % mod;
    base = (base * base) % mod;
    e >>= 1;
  }
  return r;
}

// x^(q^steps) mod f by iterated q-powering.
inline Poly frobenius_power(const Poly& x, int steps, const Poly& mod) {
  Poly r = x % mod;
  for (int i = 0; i < steps; ++i) r = powmod(r, u64(mod.gf().q()), mod);
  return r;
}

// Cantor-Zassenhaus equal-degree split of a squarefree product of
// irreducibles all of degree d. Deterministically seeded; odd q only.
inline void equal_degree_split(const Poly& f, int d, u64 salt, std::vector<Poly>& out) {
  if (f.degree() == d) {
    out.push_back(f);
    return;
  }
  const GfPtr& gf = f.field();
  u64 q = u64(gf->q());
  u64 half = (upow(q, d) - 1) / 2;
  std::mt19937_64 rng(salt ^ (0x9e3779b97f4a7c15ULL * u64(f.index_below(f.degree() + 1))));
  while (true) {
    u64 idx = rng() % upow(q, f.degree());
    Poly a = Poly::from_index(gf, idx, f.degree());
    if (a.degree() < 1) continue;
    Poly g = gcd(a, f);
    if (g.degree() >= 1 && g.degree() < f.degree()) {
      equal_degree_split(g, d, salt + 1, out);
      equal_degree_split(f / g, d, salt + 1, out);
      return;
    }
    Poly b = powmod(a, half, f);
    Poly split = gcd(b - Poly::one(gf), f);
    if (split.degree() >= 1 && split.degree() < f.degree()) {
      equal_degree_split(split, d, salt + 1, out);
      equal_degree_split(f / split, d, salt + 1, out);
      return;
    }
  }
}

// Distinct-degree then equal-degree factorization of a monic squarefree f
// with no factor of degree <= skip_below.
inline void ddf(Poly f, int skip_below, u64 salt, std::vector<Poly>& out) {
  GfPtr gf = f.field();
  Poly h = frobenius_power(Poly::t_power(gf, 1), skip_below, f);
  int d = skip_below;
  while (f.degree() >= 1) {
    ++d;
    if (2 * d > f.degree()) { out.push_back(f); return; }
    h = powmod(h, u64(gf->q()), f);
    Poly diff = h - (Poly::t_power(gf, 1) % f);
    Poly g = diff.is_zero() ? f : gcd(diff, f);
    if (g.degree() >= 1) {
      equal_degree_split(g, d, salt, out);
      f = f / g;
      h = h % f;
    }
  }
}

}  // namespace detail

inline bool is_irreducible(const Poly& x) {
  if (x.is_zero()) fail(Errc::ZeroPolynomial, "irreducibility of zero");
  if (x.degree() == 0) fail(Errc::ConstantPolynomial, "irreducibility of a constant");
  Poly m = x.monic();
  int d = m.degree();
  if (d == 1) return true;
  if (d / 2 <= detail::kTrialDivisionMaxDegree) {
    auto& table = detail::irreducible_table(x.field());
    for (int dd = 1; dd <= d / 2; ++dd)
      for (const Poly& p : table.of_degree(dd))
        if ((m % p).is_zero()) return false;
    return true;
  }
  // Rabin test for the degrees trial division cannot reach
  const GfPtr& gf = x.field();
  Poly t = Poly::t_power(gf, 1);
  Poly xd = detail::frobenius_power(t, d, m);
  if (!(xd == t % m)) return false;
  for (int p = 2; p <= d; ++p) {
    if (d % p != 0 || !detail::is_prime_int(p)) continue;
    Poly xe = detail::frobenius_power(t, d / p, m);
    Poly diff = xe - t;
    if (diff.is_zero()) return false;
    if (gcd(diff, m).degree() >= 1) return false;
  }
  return true;
}

inline Factorization factorize(const Poly& x) {
  if (x.is_zero()) fail(Errc::ZeroPolynomial, "factorize(0)");
  Factorization out;
  out.unit = x.lead();
  Poly m = x.monic();
  if (m.degree() == 0) return out;
  auto& table = detail::irreducible_table(x.field());
  for (int d = 1; d <= detail::kTrialDivisionMaxDegree && 2 * d <= m.degree(); ++d) {
    for (const Poly& p : table.of_degree(d)) {
      if (2 * d > m.degree()) break;
      int e = 0;
      while (true) {
        auto [q, r] = m.divrem(p);
        if (!r.is_zero()) break;
        m = std::move(q);
        ++e;
      }
      if (e > 0) out.factors.emplace_back(p, e);
    }
  }
  if (m.degree() >= 1) {
    if (m.degree() <= 2 * detail::kTrialDivisionMaxDegree + 1) {
      out.factors.emplace_back(m, 1);  // no factor up to deg(m)/2 survived trial division
    } else {
      Factorization rest = detail::factorize_large(m, 0x5eedULL);
      for (auto& fe : rest.factors) out.factors.push_back(std::move(fe));
    }
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    return a.first.index_below(a.first.degree() + 1) < b.first.index_below(b.first.degree() + 1);
  });
  return out;
}

namespace detail {

// Squarefree decomposition + DDF/CZ for cofactors beyond the trial table.
inline Factorization factorize_large(Poly f, u64 salt) {
  Factorization out;
  out.unit = 1;
  // split off repeated factors via gcd with the derivative
  Poly df = derivative(f);
  if (df.is_zero()) {
    // f is a polynomial in T^p: take the Frobenius preimage and recurse
    Poly root = frobenius_root(f);
    Factorization inner = factorize(root);
    for (auto& [p, e] : inner.factors) out.factors.emplace_back(p, e * f.gf().p());
    return out;
  }
  Poly c = gcd(f, df);
  if (c.degree() >= 1) {
    Poly w = f / c;  // squarefree part covering every factor with p-coprime multiplicity
    Factorization parts = factorize(w);
    Poly remaining = f;
    for (auto& [p, e1] : parts.factors) {
      int e = 0;
      while ((remaining % p).is_zero()) { remaining = remaining / p; ++e; }
      out.factors.emplace_back(p, e);
    }
    if (remaining.degree() >= 1) {
      Factorization rest = factorize_large(remaining, salt + 1);
      for (auto& fe : rest.factors) out.factors.push_back(std::move(fe));
    }
    return out;
  }
  std::vector<Poly> irred;
  ddf(f, 0, salt, irred);
  for (Poly& p : irred) out.factors.emplace_back(std::move(p), 1);
  return out;
}

}  // namespace detail

inline std::vector<Poly> monic_divisors(const Factorization& fac, const GfPtr& f) {
  std::vector<Poly> divs{Poly::one(f)};
  for (const auto& [p, e] : fac.factors) {
    size_t base = divs.size();
    Poly pk = p;
    for (int k = 1; k <= e; ++k) {
      for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
      if (k < e) pk = pk * p;
    }
  }
  return divs;
}

inline std::vector<Poly> monic_divisors(const Poly& x) {
  return monic_divisors(factorize(x), x.field());
}

inline i64 divisor_count(const Poly& x) {
  if (x.is_zero()) fail(Errc::ZeroPolynomial, "divisor_count(0)");
  i64 n = 1;
  for (const auto& [p, e] : factorize(x).factors) n *= (e + 1);
  return n;
}

inline i64 euler_phi(const Poly& f_in) {
  if (f_in.is_zero() || f_in.degree() < 1) fail(Errc::ConfigError, "euler_phi needs deg >= 1");
  i64 phi = 1;
  i64 q = f_in.gf().q();
  for (const auto& [p, e] : factorize(f_in).factors) {
    i64 qd = ipow(q, p.degree());
    phi *= ipow(qd, e - 1) * (qd - 1);
  }
  return phi;
}

}  // namespace ffsum
