#pragma once

#include <cmath>
#include <string>

#include "ffsum/common.hpp"

namespace ffsum {

inline i128 gcd_i128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Exact rational on 128-bit integers, normalized with positive denominator.
// Desk-scale magnitudes only (denominators here stay far below 2^60).
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(i64 n) : num_(n), den_(1) {}
  Rational(i128 n, i128 d) : num_(n), den_(d) { normalize(); }

  static Rational from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s), 1);
    return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  }

  i128 num() const { return num_; }
  i128 den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  Rational operator-() const { return Rational(-num_, den_); }
  Rational abs() const { return num_ < 0 ? -*this : *this; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) fail(Errc::DivisionByZero, "rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  double to_double() const { return double(num_) / double(den_); }
  long double to_long_double() const { return (long double)(num_) / (long double)(den_); }

  std::string str() const {
    if (den_ == 1) return i128_to_string(num_);
    return i128_to_string(num_) + "/" + i128_to_string(den_);
  }

 private:
  static i128 parse_int(const std::string& s) {
    size_t i = 0;
    bool neg = false;
    while (i < s.size() && (s[i] == ' ')) ++i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = (s[i] == '-'), ++i;
    if (i >= s.size()) fail(Errc::ConfigError, "empty integer literal");
    i128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] == ' ') continue;
      if (s[i] < '0' || s[i] > '9') fail(Errc::ConfigError, "bad integer literal: " + s);
      v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
  }

  void normalize() {
    if (den_ == 0) fail(Errc::DivisionByZero, "rational with zero denominator");
    if (den_ < 0) num_ = -num_, den_ = -den_;
    i128 g = gcd_i128(num_, den_);
    if (g > 1) num_ /= g, den_ /= g;
    if (num_ == 0) den_ = 1;
  }

  i128 num_, den_;
};

// Element of Q(i); weight sequences store these when the source is exact.
struct GaussianRational {
  Rational re, im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(r) {}
  GaussianRational(Rational r, Rational i) : re(r), im(i) {}
  static GaussianRational integer(i64 v) { return GaussianRational(Rational(v)); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_rational_integer() const { return im.is_zero() && re.den() == 1; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  double abs() const { return std::sqrt(re.to_double() * re.to_double() + im.to_double() * im.to_double()); }
};

}  // namespace ffsum
