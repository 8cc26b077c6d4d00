#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ffsum/gf.hpp"

namespace ffsum {

// Element of F_q[T]: coefficient indices low-to-high, canonical (no zero
// leading coefficient); the zero polynomial has an empty vector and degree
// kNegInfDeg. Values are immutable in spirit: all operations return copies.
class Poly {
 public:
  Poly() = default;
  explicit Poly(GfPtr f) : f_(std::move(f)) {}
  Poly(GfPtr f, std::vector<u32> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) { trim(); }

  static Poly zero(GfPtr f) { return Poly(std::move(f)); }
  static Poly constant(GfPtr f, u32 e) {
    Poly r(std::move(f));
    if (e != 0) r.c_ = {e};
    return r;
  }
  static Poly one(GfPtr f) { return constant(std::move(f), 1); }
  static Poly t_power(GfPtr f, int k, u32 lead = 1) {
    Poly r(std::move(f));
    if (lead != 0) {
      r.c_.assign(k + 1, 0);
      r.c_[k] = lead;
    }
    return r;
  }

  const GfPtr& field() const { return f_; }
  const Gf& gf() const { return *f_; }
  const std::vector<u32>& coeffs() const { return c_; }

  int degree() const { return c_.empty() ? kNegInfDeg : int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_unit() const { return c_.size() == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  u32 lead() const {
    if (c_.empty()) fail(Errc::ZeroPolynomial, "leading coefficient of zero");
    return c_.back();
  }
  u32 coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[i] : 0; }

  Poly monic() const {
    if (is_zero()) fail(Errc::ZeroPolynomial, "monic part of zero");
    if (is_monic()) return *this;
    return scaled(f_->inv(lead()));
  }

  Poly scaled(u32 e) const {
    if (e == 0) return Poly(f_);
    Poly r(f_);
    r.c_.resize(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = f_->mul(c_[i], e);
    return r;
  }

  Poly shifted(int k) const {  // multiply by T^k
    if (is_zero() || k == 0) return k == 0 ? *this : Poly(f_);
    Poly r(f_);
    r.c_.assign(c_.size() + k, 0);
    std::copy(c_.begin(), c_.end(), r.c_.begin() + k);
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    a.check_ctx(b);
    Poly r(a.f_);
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.f_->add(a.coeff(int(i)), b.coeff(int(i)));
    r.trim();
    return r;
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  Poly operator-() const {
    Poly r(f_);
    r.c_.resize(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = f_->neg(c_[i]);
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_ctx(b);
    if (a.is_zero() || b.is_zero()) return Poly(a.f_);
    Poly r(a.f_);
    r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
    const Gf& f = *a.f_;
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (size_t j = 0; j < b.c_.size(); ++j)
        r.c_[i + j] = f.add(r.c_[i + j], f.mul(a.c_[i], b.c_[j]));
    }
    return r;
  }

  // (quot, rem) with *this = quot*d + rem and deg rem < deg d.
  std::pair<Poly, Poly> divrem(const Poly& d) const {
    check_ctx(d);
    if (d.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
    if (degree() < d.degree()) return {Poly(f_), *this};
    const Gf& f = *f_;
    std::vector<u32> rem = c_;
    std::vector<u32> quot(c_.size() - d.c_.size() + 1, 0);
    u32 lead_inv = f.inv(d.lead());
    for (int i = int(rem.size()) - 1; i >= int(d.c_.size()) - 1; --i) {
      if (rem[i] == 0) continue;
      u32 factor = f.mul(rem[i], lead_inv);
      int shift = i - (int(d.c_.size()) - 1);
      quot[shift] = factor;
      for (size_t j = 0; j < d.c_.size(); ++j)
        rem[shift + j] = f.sub(rem[shift + j], f.mul(factor, d.c_[j]));
    }
    return {Poly(f_, std::move(quot)), Poly(f_, std::move(rem))};
  }

  friend Poly operator/(const Poly& a, const Poly& b) { return a.divrem(b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return a.divrem(b).second; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.c_ == b.c_ && (a.f_ == b.f_ || (a.f_ && b.f_ && a.f_->same_field(*b.f_)));
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  u32 eval(u32 x) const {
    const Gf& f = *f_;
    u32 acc = 0;
    for (int i = int(c_.size()) - 1; i >= 0; --i) acc = f.add(f.mul(acc, x), c_[i]);
    return acc;
  }

  // Base-q index over the range deg < n (coefficient of T^0 is the least
  // significant digit, so index order enumerates the low coefficient fastest).
  u64 index_below(int n) const {
    u64 idx = 0;
    for (int i = n - 1; i >= 0; --i) idx = idx * u64(f_->q()) + coeff(i);
    return idx;
  }

  static Poly from_index(const GfPtr& f, u64 idx, int n) {
    Poly r(f);
    r.c_.assign(n, 0);
    u64 q = u64(f->q());
    for (int i = 0; i < n; ++i) { r.c_[i] = u32(idx % q); idx /= q; }
    r.trim();
    return r;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = int(c_.size()) - 1; i >= 0; --i) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += "+";
      if (i == 0) { s += std::to_string(c_[i]); continue; }
      if (c_[i] != 1) s += std::to_string(c_[i]);
      s += "T";
      if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
  }

  // Accepts the symbolic form ("T^2+2T+1", coefficients as packed element
  // indices) or comma-separated coefficient indices low-to-high ("1,2,1").
  static Poly parse(const GfPtr& f, const std::string& text);

  void check_ctx(const Poly& o) const {
    if (f_ == o.f_) return;
    if (!f_ || !o.f_ || !f_->same_field(*o.f_)) fail(Errc::ContextMismatch, "mixed field contexts");
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  GfPtr f_;
  std::vector<u32> c_;
};

inline Poly gcd(Poly a, Poly b) {
  a.check_ctx(b);
  if (a.is_zero() && b.is_zero()) fail(Errc::ZeroPolynomial, "gcd(0, 0)");
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Monic g = gcd(x, y) together with s, t satisfying s*x + t*y = g.
inline std::tuple<Poly, Poly, Poly> xgcd(const Poly& x, const Poly& y) {
  x.check_ctx(y);
  if (x.is_zero() && y.is_zero()) fail(Errc::ZeroPolynomial, "xgcd(0, 0)");
  GfPtr f = x.field() ? x.field() : y.field();
  Poly r0 = x, r1 = y;
  Poly s0 = Poly::one(f), s1 = Poly::zero(f);
  Poly t0 = Poly::zero(f), t1 = Poly::one(f);
  while (!r1.is_zero()) {
    auto [q, r2] = r0.divrem(r1);
    Poly s2 = s0 - q * s1;
    Poly t2 = t0 - q * t1;
    r0 = std::move(r1); r1 = std::move(r2);
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  u32 c = f->inv(r0.lead());
  return {r0.scaled(c), s0.scaled(c), t0.scaled(c)};
}

inline Poly Poly::parse(const GfPtr& f, const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) fail(Errc::ConfigError, "empty polynomial literal");
  bool symbolic = s.find('T') != std::string::npos || s.find('t') != std::string::npos;
  if (!symbolic && s.find(',') != std::string::npos) {
    std::vector<u32> coeffs;
    size_t pos = 0;
    while (pos <= s.size()) {
      size_t comma = s.find(',', pos);
      std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (item.empty()) fail(Errc::ConfigError, "bad polynomial literal: " + text);
      long v = std::strtol(item.c_str(), nullptr, 10);
      if (v < 0 || v >= f->q()) fail(Errc::ConfigError, "coefficient out of range: " + item);
      coeffs.push_back(u32(v));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return Poly(f, std::move(coeffs));
  }
  if (!symbolic) {
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || v < 0 || v >= f->q())
      fail(Errc::ConfigError, "bad polynomial literal: " + text);
    return Poly::constant(f, u32(v));
  }
  // symbolic: [sign] term (sign term)*, term = [coef][T[^exp]]
  Poly acc = Poly::zero(f);
  size_t i = 0;
  int sign = +1;
  while (i < s.size()) {
    if (s[i] == '+') { sign = +1; ++i; continue; }
    if (s[i] == '-') { sign = -1; ++i; continue; }
    u64 coef = 1;
    bool saw_digits = false;
    u64 digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits = digits * 10 + u64(s[i] - '0');
      saw_digits = true;
      ++i;
    }
    if (saw_digits) coef = digits;
    int exp = 0;
    if (i < s.size() && (s[i] == 'T' || s[i] == 't')) {
      ++i;
      exp = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        u64 e = 0;
        bool any = false;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
          e = e * 10 + u64(s[i] - '0');
          any = true;
          ++i;
        }
        if (!any) fail(Errc::ConfigError, "bad exponent in: " + text);
        exp = int(e);
      }
    } else if (!saw_digits) {
      fail(Errc::ConfigError, "bad polynomial literal: " + text);
    }
    if (coef >= u64(f->q())) fail(Errc::ConfigError, "coefficient out of range in: " + text);
    u32 c = u32(coef);
    if (sign < 0) c = f->neg(c);
    acc = acc + Poly::t_power(f, exp, c);
    sign = +1;
  }
  return acc;
}

// Deterministic random-access enumerations; at(i) is a pure function of i,
// so consumers may partition [0, size) freely without changing results.
struct RangeAllBelow {  // all polynomials with deg < n, base-q counter order
  GfPtr f;
  int n;
  u64 size() const { return upow(u64(f->q()), n); }
  Poly at(u64 i) const { return Poly::from_index(f, i, n); }
};

struct RangeMonic {  // monic polynomials of degree n
  GfPtr f;
  int n;
  u64 size() const { return upow(u64(f->q()), n); }
  Poly at(u64 i) const {
    Poly lower = Poly::from_index(f, i, n);
    return lower + Poly::t_power(f, n);
  }
};

}  // namespace ffsum
