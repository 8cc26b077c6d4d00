#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffsum/common.hpp"

namespace ffsum {

namespace detail {

// Arithmetic on dense GF(p)[u] coefficient vectors (low degree first, no
// canonical-form requirement). Used for defining-polynomial validation and
// the table-free element path.
inline void zp_trim(std::vector<int>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<int> zp_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                                  const std::vector<int>& mod, int p) {
  std::vector<int> prod(a.size() + b.size() >= 1 ? a.size() + b.size() - 1 : 0, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) prod[i + j] = int((prod[i + j] + i64(a[i]) * b[j]) % p);
  }
  // mod is monic
  int dm = int(mod.size()) - 1;
  for (int d = int(prod.size()) - 1; d >= dm; --d) {
    int c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (int j = 0; j < dm; ++j) prod[d - dm + j] = ((prod[d - dm + j] - c * mod[j]) % p + p) % p;
  }
  prod.resize(dm > 0 ? dm : 0);
  return prod;
}

inline std::vector<int> zp_powmod(std::vector<int> base, u64 e, const std::vector<int>& mod, int p) {
  std::vector<int> r{1};
  r.resize(mod.size() - 1, 0);
  if (mod.size() == 1) return {};
  while (e > 0) {
    if (e & 1) r = zp_mulmod(r, base, mod, p);
    base = zp_mulmod(base, base, mod, p);
    e >>= 1;
  }
  return r;
}

inline std::vector<int> zp_gcd(std::vector<int> a, std::vector<int> b, int p) {
  zp_trim(a);
  zp_trim(b);
  while (!b.empty()) {
    // a mod b
    int db = int(b.size()) - 1;
    int lb = b.back();
    // inverse of lb mod p
    int inv = 1;
    for (int i = 1; i < p; ++i)
      if (i64(lb) * i % p == 1) { inv = i; break; }
    while (int(a.size()) - 1 >= db && !a.empty()) {
      int da = int(a.size()) - 1;
      int c = int(i64(a.back()) * inv % p);
      for (int j = 0; j <= db; ++j) a[da - db + j] = ((a[da - db + j] - c * b[j]) % p + p) % p;
      zp_trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

inline bool is_prime_int(int n) {
  if (n < 2) return false;
  for (int d = 2; i64(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Rabin irreducibility test over GF(p); poly monic of degree >= 1.
inline bool zp_is_irreducible(const std::vector<int>& f, int p) {
  int d = int(f.size()) - 1;
  if (d == 1) return true;
  std::vector<int> x{0, 1};
  // x^(p^d) == x mod f
  std::vector<int> xp = x;
  for (int i = 0; i < d; ++i) xp = zp_powmod(xp, u64(p), f, p);
  std::vector<int> diff = xp;
  diff.resize(std::max(diff.size(), size_t(2)), 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  zp_trim(diff);
  if (!diff.empty()) return false;
  // gcd(x^(p^(d/t)) - x, f) == 1 for prime t | d
  for (int t = 2; t <= d; ++t) {
    if (d % t != 0 || !is_prime_int(t)) continue;
    std::vector<int> xe = x;
    for (int i = 0; i < d / t; ++i) xe = zp_powmod(xe, u64(p), f, p);
    std::vector<int> g = xe;
    g.resize(std::max(g.size(), size_t(2)), 0);
    g[1] = ((g[1] - 1) % p + p) % p;
    auto gg = zp_gcd(g, f, p);
    if (!(gg.size() == 1)) return false;
  }
  return true;
}

}  // namespace detail

// The coefficient field GF(q), q = p^ell with p an odd prime. Elements are
// identified with packed indices in [0, q): index = sum coord_i * p^i over
// the polynomial basis modulo the defining polynomial. Immutable and
// shareable; all operations are pure.
class Gf {
 public:
  static std::shared_ptr<const Gf> make(int p, int ell,
                                        std::optional<std::vector<int>> defining = std::nullopt) {
    if (p == 2) fail(Errc::EvenCharacteristic, "characteristic 2 is not supported");
    if (p < 2 || !detail::is_prime_int(p)) fail(Errc::NotPrime, "p = " + std::to_string(p) + " is not prime");
    if (ell < 1) fail(Errc::ConfigError, "extension degree must be >= 1");
    std::vector<int> mod;
    if (defining) {
      mod = *defining;
      if (int(mod.size()) != ell + 1 || mod.back() != 1)
        fail(Errc::NotIrreducible, "defining polynomial must be monic of degree ell");
      for (int c : mod)
        if (c < 0 || c >= p) fail(Errc::ConfigError, "defining coefficients must lie in [0, p)");
      if (!detail::zp_is_irreducible(mod, p))
        fail(Errc::NotIrreducible, "defining polynomial is reducible");
    } else {
      mod = smallest_irreducible(p, ell);
    }
    return std::shared_ptr<const Gf>(new Gf(p, ell, std::move(mod)));
  }

  int p() const { return p_; }
  int ell() const { return ell_; }
  i64 q() const { return q_; }
  const std::vector<int>& defining_poly() const { return mod_; }
  std::string spec_string() const {
    std::string s = std::to_string(p_);
    if (ell_ > 1) s += "^" + std::to_string(ell_);
    return s;
  }

  bool same_field(const Gf& o) const { return p_ == o.p_ && ell_ == o.ell_ && mod_ == o.mod_; }

  u32 zero() const { return 0; }
  u32 one() const { return 1; }

  u32 add(u32 a, u32 b) const {
    if (ell_ == 1) { u32 s = a + b; return s >= u32(p_) ? s - p_ : s; }
    u32 r = 0, m = 1;
    for (int i = 0; i < ell_; ++i) {
      u32 da = a % p_, db = b % p_;
      a /= p_; b /= p_;
      u32 s = da + db;
      if (s >= u32(p_)) s -= p_;
      r += s * m;
      m *= p_;
    }
    return r;
  }

  u32 neg(u32 a) const {
    if (ell_ == 1) return a == 0 ? 0 : u32(p_) - a;
    u32 r = 0, m = 1;
    for (int i = 0; i < ell_; ++i) {
      u32 d = a % p_;
      a /= p_;
      r += (d == 0 ? 0 : u32(p_) - d) * m;
      m *= p_;
    }
    return r;
  }

  u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }

  u32 mul(u32 a, u32 b) const {
    if (a == 0 || b == 0) return 0;
    if (tables_) return exp_[(log_[a] + log_[b]) % (q_ - 1)];
    return slow_mul(a, b);
  }

  u32 inv(u32 a) const {
    if (a == 0) fail(Errc::DivisionByZero, "inverse of zero field element");
    if (tables_) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    return pow(a, q_ - 2);
  }

  u32 pow(u32 a, i64 e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    e %= (q_ - 1);
    if (e < 0) e += q_ - 1;
    if (tables_) return exp_[u64(log_[a]) * u64(e) % u64(q_ - 1)];
    u32 r = 1, base = a;
    while (e > 0) {
      if (e & 1) r = slow_mul(r, base);
      base = slow_mul(base, base);
      e >>= 1;
    }
    return r;
  }

  // Absolute trace Tr(x) = sum of x^(p^i), i < ell; lands in the prime field.
  int trace(u32 a) const {
    if (ell_ == 1) return int(a);
    if (!trace_.empty()) return trace_[a];
    return compute_trace(a);
  }

  std::vector<int> coords_of(u32 a) const {
    std::vector<int> c(ell_);
    for (int i = 0; i < ell_; ++i) { c[i] = int(a % p_); a /= p_; }
    return c;
  }

  u32 from_coords(const std::vector<int>& c) const {
    u32 r = 0, m = 1;
    for (int i = 0; i < ell_; ++i) {
      int d = i < int(c.size()) ? c[i] : 0;
      if (d < 0 || d >= p_) fail(Errc::ConfigError, "coordinate out of range");
      r += u32(d) * m;
      m *= p_;
    }
    return r;
  }

 private:
  Gf(int p, int ell, std::vector<int> mod) : p_(p), ell_(ell), mod_(std::move(mod)) {
    q_ = ipow(p_, ell_);
    if (q_ <= (i64(1) << 16)) build_tables();
  }

  static std::vector<int> smallest_irreducible(int p, int ell) {
    // Lexicographically smallest monic irreducible, coefficients compared
    // low-to-high: odometer with the constant coefficient most significant.
    std::vector<int> c(ell, 0);
    while (true) {
      std::vector<int> f = c;
      f.push_back(1);
      if (detail::zp_is_irreducible(f, p)) return f;
      int i = ell - 1;
      while (i >= 0 && c[i] == p - 1) c[i--] = 0;
      if (i < 0) break;
      ++c[i];
    }
    fail(Errc::NotIrreducible, "no irreducible polynomial found");  // unreachable
  }

  u32 slow_mul(u32 a, u32 b) const {
    auto va = coords_of(a), vb = coords_of(b);
    auto prod = detail::zp_mulmod(va, vb, mod_, p_);
    prod.resize(ell_, 0);
    u32 r = 0, m = 1;
    for (int i = 0; i < ell_; ++i) { r += u32(prod[i]) * m; m *= p_; }
    return r;
  }

  int compute_trace(u32 a) const {
    u32 acc = a, frob = a;
    for (int i = 1; i < ell_; ++i) {
      frob = pow_raw(frob, p_);
      acc = add(acc, frob);
    }
    // trace lies in the prime subfield: all upper coordinates vanish
    u32 rest = acc / u32(p_);
    if (rest != 0) fail(Errc::InvariantViolation, "trace left the prime field");
    return int(acc % u32(p_));
  }

  u32 pow_raw(u32 a, i64 e) const {
    u32 r = 1, base = a;
    while (e > 0) {
      if (e & 1) r = slow_mul(r, base);
      base = slow_mul(base, base);
      e >>= 1;
    }
    return r;
  }

  void build_tables() {
    // discrete-log tables over a generator of the unit group
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    u32 g = 0;
    for (u32 cand = 2; cand < u32(q_); ++cand) {
      if (order_is_full(cand)) { g = cand; break; }
    }
    if (g == 0) fail(Errc::InvariantViolation, "no generator found");
    u32 v = 1;
    for (i64 i = 0; i < q_ - 1; ++i) {
      exp_[i] = v;
      log_[v] = u32(i);
      v = slow_mul(v, g);
    }
    tables_ = true;
    trace_.assign(q_, 0);
    for (i64 a = 0; a < q_; ++a) trace_[a] = (ell_ == 1) ? int(a) : compute_trace(u32(a));
  }

  bool order_is_full(u32 g) const {
    const i64 full = q_ - 1;
    i64 n = full;
    for (i64 t = 2; t * t <= n; ++t) {
      if (n % t != 0) continue;
      if (pow_raw(g, full / t) == 1) return false;
      while (n % t == 0) n /= t;
    }
    if (n > 1 && pow_raw(g, full / n) == 1) return false;
    return true;
  }

  int p_, ell_;
  i64 q_;
  std::vector<int> mod_;
  bool tables_ = false;
  std::vector<u32> exp_, log_;
  std::vector<int> trace_;
};

using GfPtr = std::shared_ptr<const Gf>;

}  // namespace ffsum
