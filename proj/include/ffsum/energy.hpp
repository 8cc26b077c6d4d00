#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "ffsum/charsum.hpp"
#include "ffsum/parallel.hpp"

namespace ffsum {

// Counts of inverses: counts[residue] = #{x : deg x < n, (x, F) = 1,
// inv(x) == residue}; total mass is the number of coprime x in the range.
struct ResidueDistribution {
  i64 states = 0;
  std::vector<i64> counts;
  i64 mass = 0;
};

inline ResidueDistribution inversion_distribution(const Modulus& F, int n) {
  if (n < 0) fail(Errc::ConfigError, "negative range");
  if (!F.has_tables()) fail(Errc::ResourceLimit, "modulus beyond table budget");
  ResidueDistribution d;
  d.states = F.states();
  d.counts.assign(d.states, 0);
  i64 copies = n > F.r() ? ipow(F.gf().q(), n - F.r()) : 1;
  u64 count = upow(u64(F.gf().q()), std::min(n, F.r()));
  for (u64 i = 0; i < count; ++i) {
    if (!F.is_unit_residue(i)) continue;
    d.counts[F.inverse_index(i)] += copies;
    d.mass += copies;
  }
  return d;
}

namespace detail {

// residue indices add digitwise mod p (base-q digits are themselves packed
// base p, so the whole index is a base-p vector)
inline u64 index_add_base_p(u64 a, u64 b, int p, int dims) {
  u64 out = 0, m = 1;
  for (int i = 0; i < dims; ++i) {
    int s = int(a % p) + int(b % p);
    if (s >= p) s -= p;
    out += u64(s) * m;
    a /= p;
    b /= p;
    m *= u64(p);
  }
  return out;
}

inline u64 index_sub_base_p(u64 a, u64 b, int p, int dims) {
  u64 out = 0, m = 1;
  for (int i = 0; i < dims; ++i) {
    int s = int(a % p) - int(b % p);
    if (s < 0) s += p;
    out += u64(s) * m;
    a /= p;
    b /= p;
    m *= u64(p);
  }
  return out;
}

// Residue reduction on packed indices: one shift-by-T step followed by the
// monic top-coefficient elimination, suitable for DP sweeps over index
// ranges without touching Poly objects.
class IndexReducer {
 public:
  explicit IndexReducer(const Modulus& F)
      : p_(F.gf().p()), dims_(F.r() * F.gf().ell()), q_(u64(F.gf().q())), r_(F.r()) {
    top_pow_ = 1;
    for (int i = 0; i < r_; ++i) top_pow_ *= q_;
    low_scaled_.assign(F.gf().q(), 0);
    if (r_ >= 1) {
      Poly low = F.poly() - Poly::t_power(F.field(), r_);
      for (u32 c = 0; c < u32(F.gf().q()); ++c)
        low_scaled_[c] = low.scaled(c).index_below(r_);
    }
  }

  // index of (T * y + c0) mod F, for a residue index y (deg y < r)
  u64 step(u64 y, u32 c0) const {
    if (r_ == 0) return 0;
    u64 shifted = y * q_ + u64(c0);
    u64 top = shifted / top_pow_;
    u64 low = shifted % top_pow_;
    if (top == 0) return low;
    return index_sub_base_p(low, low_scaled_[top], p_, dims_);
  }

  // residue indices of every polynomial with deg < len (len >= r)
  std::vector<u64> reduce_range(int len) const {
    u64 size = 1;
    for (int i = 0; i < len; ++i) size *= q_;
    std::vector<u64> res(size);
    if (r_ == 0) return res;
    u64 prefix = std::min<u64>(size, top_pow_);
    for (u64 x = 0; x < prefix; ++x) res[x] = x;
    for (u64 x = prefix; x < size; ++x) res[x] = step(res[x / q_], u32(x % q_));
    return res;
  }

 private:
  int p_, dims_;
  u64 q_;
  int r_;
  u64 top_pow_ = 1;
  std::vector<u64> low_scaled_;
};

inline std::vector<i64> convolve_direct(const std::vector<i64>& A, const std::vector<i64>& B,
                                        int p, int dims) {
  std::vector<i64> out(A.size(), 0);
  for (u64 i = 0; i < A.size(); ++i) {
    if (A[i] == 0) continue;
    for (u64 j = 0; j < B.size(); ++j) {
      if (B[j] == 0) continue;
      out[index_add_base_p(i, j, p, dims)] += A[i] * B[j];
    }
  }
  return out;
}

inline std::vector<i64> self_convolve_direct(const std::vector<i64>& D, int k, int p, int dims) {
  std::vector<i64> acc = D;
  for (int i = 1; i < k; ++i) acc = convolve_direct(acc, D, p, dims);
  return acc;
}

// Exact k-fold additive self-convolution over (Z_p)^dims via a transform in
// Z[x]/(x^p - 1): multiplication by a root of unity is a cyclic shift, so
// the whole pipeline stays in integers. Forward transform, pointwise k-th
// power, inverse transform; the final division by p^dims is checked exactly.
class CycloTransform {
 public:
  CycloTransform(int p, int dims) : p_(p), dims_(dims), n_(1) {
    for (int i = 0; i < dims_; ++i) n_ *= u64(p_);
  }

  std::vector<i64> self_convolve(const std::vector<i64>& D, int k) const {
    std::vector<i64> buf(n_ * u64(p_), 0);
    for (u64 i = 0; i < n_; ++i) buf[i * p_] = D[i];
    transform(buf, +1);
    pointwise_power(buf, k);
    transform(buf, -1);
    std::vector<i64> out(n_);
    u64 scale = 1;
    for (int i = 0; i < dims_; ++i) scale *= u64(p_);
    for (u64 i = 0; i < n_; ++i) {
      const i64* e = &buf[i * p_];
      for (int j = 2; j < p_; ++j)
        if (e[j] != e[1]) fail(Errc::InvariantViolation, "transform output not a rational integer");
      i64 val = e[0] - e[1];
      if (val % i64(scale) != 0) fail(Errc::InvariantViolation, "transform output not divisible");
      out[i] = val / i64(scale);
    }
    return out;
  }

 private:
  void transform(std::vector<i64>& buf, int dir) const {
    std::vector<i64> line((size_t)p_ * p_);
    u64 stride = 1;
    for (int d = 0; d < dims_; ++d) {
      for (u64 base = 0; base < n_; ++base) {
        if ((base / stride) % u64(p_) != 0) continue;
        // gather the line, transform, scatter
        std::fill(line.begin(), line.end(), 0);
        for (int j = 0; j < p_; ++j) {
          for (int s = 0; s < p_; ++s) {
            const i64* e = &buf[(base + u64(s) * stride) * u64(p_)];
            int shift = (dir > 0 ? (j * s) % p_ : (p_ - (j * s) % p_) % p_);
            i64* o = &line[size_t(j) * p_];
            for (int c = 0; c < p_; ++c) o[(c + shift) % p_] += e[c];
          }
        }
        for (int j = 0; j < p_; ++j) {
          i64* e = &buf[(base + u64(j) * stride) * u64(p_)];
          for (int c = 0; c < p_; ++c) e[c] = line[size_t(j) * p_ + c];
        }
      }
      stride *= u64(p_);
    }
  }

  void pointwise_power(std::vector<i64>& buf, int k) const {
    if (k == 1) return;
    std::vector<i64> acc(p_), tmp(p_);
    for (u64 i = 0; i < n_; ++i) {
      i64* e = &buf[i * u64(p_)];
      for (int c = 0; c < p_; ++c) acc[c] = e[c];
      for (int rep = 1; rep < k; ++rep) {
        std::fill(tmp.begin(), tmp.end(), 0);
        for (int a = 0; a < p_; ++a) {
          if (acc[a] == 0) continue;
          for (int b = 0; b < p_; ++b) tmp[(a + b) % p_] += acc[a] * e[b];
        }
        acc = tmp;
      }
      for (int c = 0; c < p_; ++c) e[c] = acc[c];
    }
  }

  int p_, dims_;
  u64 n_;
};

// k-fold convolution of the inversion distribution, exact, method chosen by
// size; both methods agree bit for bit on their overlap.
inline std::vector<i64> inversion_convolution(const Modulus& F, int k, int n,
                                              const Budgets& budgets) {
  ResidueDistribution d = inversion_distribution(F, n);
  int p = F.gf().p();
  int dims = F.r() * F.gf().ell();
  if (k == 1) return d.counts;
  if (F.states() <= budgets.max_direct_conv) return self_convolve_direct(d.counts, k, p, dims);
  long double bound = powl((long double)(d.mass), k) * (long double)(F.states());
  if (bound > 4.0e18L) fail(Errc::ResourceLimit, "convolution exceeds exact integer range");
  return CycloTransform(p, dims).self_convolve(d.counts, k);
}

}  // namespace detail

// I_{F,a,k}(n): number of k-tuples of coprime deg < n polynomials whose
// inverses sum to a mod F.
inline i64 i_count(const Modulus& F, const Poly& a, int k, int n,
                   const Budgets& budgets = Budgets::from_env()) {
  if (k < 1) fail(Errc::ConfigError, "k must be >= 1");
  auto I = detail::inversion_convolution(F, k, n, budgets);
  return I[F.residue_index(a)];
}

struct EnergyRecord {
  i64 q = 0;
  int r = 0;
  std::string F;
  int k = 0, n = 0;
  i128 E = 0;
  std::string method;
  double seconds = 0;
};

inline EnergyRecord energy(const Modulus& F, int k, int n,
                           const Budgets& budgets = Budgets::from_env(),
                           bool brute_force = false) {
  if (k < 1) fail(Errc::ConfigError, "k must be >= 1");
  auto t0 = std::chrono::steady_clock::now();
  EnergyRecord rec;
  rec.q = F.gf().q();
  rec.r = F.r();
  rec.F = F.poly().str();
  rec.k = k;
  rec.n = n;
  if (brute_force) {
    rec.method = "brute_force";
    // literal k-tuple enumeration; inverses recomputed per element via xgcd
    std::vector<u64> elems;  // inverse residue index per coprime x
    RangeAllBelow range{F.field(), n};
    for (u64 i = 0; i < range.size(); ++i) {
      Poly x = range.at(i);
      if (x.is_zero() || !F.coprime(x)) continue;
      elems.push_back(F.mod_inverse_poly(x).index_below(F.r()));
    }
    double tuples = 1;
    for (int i = 0; i < 2 * k; ++i) tuples *= double(elems.size());
    if (tuples > budgets.max_brute_tuples) fail(Errc::ResourceLimit, "brute force beyond budget");
    std::vector<i64> I(F.states(), 0);
    int p = F.gf().p();
    int dims = F.r() * F.gf().ell();
    std::vector<u64> idx(k, 0);
    if (!elems.empty()) {  // odometer over k-tuples
      while (true) {
        u64 s = 0;
        for (int i = 0; i < k; ++i) s = detail::index_add_base_p(s, elems[idx[i]], p, dims);
        ++I[s];
        int pos = 0;
        while (pos < k && ++idx[pos] == elems.size()) idx[pos++] = 0;
        if (pos == k) break;
      }
    }
    i128 E = 0;
    for (i64 v : I) E += i128(v) * v;
    rec.E = E;
  } else {
    rec.method = "convolution";
    auto I = detail::inversion_convolution(F, k, n, budgets);
    i128 E = 0;
    for (i64 v : I) E += i128(v) * v;
    rec.E = E;
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

// sum of E_{F,k}(n) over monic F of degree r
inline i128 energy_avg(const GfPtr& f, int r, int k, int n,
                       const Budgets& budgets = Budgets::from_env(), int workers = 1) {
  if (r < 1) fail(Errc::ConfigError, "r must be >= 1");
  RangeMonic range{f, r};
  auto parts = parallel_map<i128>(range.size(), workers, [&](u64 i) {
    Modulus F(range.at(i), budgets);
    return energy(F, k, n, budgets).E;
  });
  i128 total = 0;
  for (i128 v : parts) total += v;
  return total;
}

struct MomentReport {
  int k = 0, n = 0;
  long double lhs = 0;  // sum over residues lambda of |T(lambda)|^(2k)
  i128 rhs = 0;         // q^r * E_{F,k}(n)
  double rel_dev = 0;
};

// Exact moment identity: expanding |T(lambda)|^(2k) and using orthogonality
// gives sum_lambda |T|^(2k) = q^r * E; the left side is evaluated through
// floating magnitudes, the right side exactly.
inline MomentReport moment_identity_check(const Modulus& F, int k, int n,
                                          const Budgets& budgets = Budgets::from_env()) {
  MomentReport rep;
  rep.k = k;
  rep.n = n;
  for (i64 l = 0; l < F.states(); ++l) {
    ExpHistogram T = kloosterman_incomplete(F, F.residue_at(u64(l)), n);
    long double a = T.abs_bound().value;
    long double pw = 1;
    for (int i = 0; i < 2 * k; ++i) pw *= a;
    rep.lhs += pw;
  }
  rep.rhs = i128(ipow(F.gf().q(), F.r())) * energy(F, k, n, budgets).E;
  long double rhsl = (long double)(rep.rhs);
  long double denom = std::max<long double>(1.0L, fabsl(rhsl));
  rep.rel_dev = double(fabsl(rep.lhs - rhsl) / denom);
  return rep;
}

}  // namespace ffsum
