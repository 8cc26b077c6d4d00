#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace ffsum {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Degree of the zero polynomial. Compares below every attainable degree and
// survives small additive shifts (deg a < r - n tests with a = 0).
inline constexpr int kNegInfDeg = std::numeric_limits<int>::min() / 4;

enum class Errc {
  NotPrime,
  NotIrreducible,
  EvenCharacteristic,
  DivisionByZero,
  ContextMismatch,
  NotInvertible,
  ZeroPolynomial,
  ConstantPolynomial,
  NotCoprime,
  BadCutoff,
  ResourceLimit,
  ConfigError,
  InvariantViolation,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::ContextMismatch: return "ContextMismatch";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::ConstantPolynomial: return "ConstantPolynomial";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::BadCutoff: return "BadCutoff";
    case Errc::ResourceLimit: return "ResourceLimit";
    case Errc::ConfigError: return "ConfigError";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Error";
}

// Enumeration and table budgets. Everything above a budget raises
// ResourceLimit instead of thrashing; FFSUM_BUDGET scales the state caps.
struct Budgets {
  i64 max_states = i64(1) << 20;       // residue tables, enumerated ranges
  i64 max_direct_conv = i64(1) << 12;  // q^r cap for direct additive convolution
  double max_brute_tuples = 1e8;       // mass^(2k) cap for brute-force energy

  static Budgets from_env() {
    Budgets b;
    if (const char* s = std::getenv("FFSUM_BUDGET")) {
      char* end = nullptr;
      long long v = std::strtoll(s, &end, 10);
      if (end != s && v > 0) b.max_states = v;
    }
    return b;
  }
};

inline i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline u64 upow(u64 base, int exp) {
  u64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 u = neg ? u128(-(v + 1)) + 1 : u128(v);
  char buf[48];
  int i = 48;
  while (u > 0) {
    buf[--i] = char('0' + int(u % 10));
    u /= 10;
  }
  std::string s(buf + i, 48 - i);
  return neg ? "-" + s : s;
}

}  // namespace ffsum
