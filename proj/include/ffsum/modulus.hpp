#pragma once

#include <memory>
#include <vector>

#include "ffsum/factor.hpp"

namespace ffsum {

// A modulus F together with everything the sum evaluators need: the monic
// normalization, factorization, phi(F), and (within budget) the residue
// inverse table and the unit list. Non-monic input F = c*F_m is normalized
// to F_m; the character picks up the rescaling e_F(x) = e_{F_m}(x/c).
// The degree-zero modulus F = c is allowed (one residue, trivial character)
// so that modulus reduction by gcd(a, F) is total.
class Modulus {
 public:
  explicit Modulus(const Poly& f_in, const Budgets& budgets = Budgets::from_env()) {
    if (f_in.is_zero()) fail(Errc::ZeroPolynomial, "zero modulus");
    unit_ = f_in.lead();
    fm_ = f_in.monic();
    r_ = fm_.degree();
    f_ = fm_.field();
    if (r_ >= 1) {
      fac_ = factorize(fm_);
      phi_ = 1;
      i64 q = f_->q();
      for (const auto& [p, e] : fac_.factors) {
        i64 qd = ipow(q, p.degree());
        phi_ *= ipow(qd, e - 1) * (qd - 1);
      }
    } else {
      phi_ = 1;  // the zero ring: the single residue counts as its own unit
    }
    states_ = ipow(f_->q(), r_);
    top_pow_ = r_ >= 1 ? u64(ipow(f_->q(), r_ - 1)) : 1;
    unit_inv_ = unit_ == 1 ? 1 : f_->inv(unit_);
    if (states_ <= budgets.max_states) build_tables();
  }

  const GfPtr& field() const { return f_; }
  const Gf& gf() const { return *f_; }
  const Poly& poly() const { return fm_; }  // monic normalization
  u32 lead_unit() const { return unit_; }
  int r() const { return r_; }
  i64 phi() const { return phi_; }
  int omega() const { return fac_.omega(); }
  const Factorization& factorization() const { return fac_; }
  i64 states() const { return states_; }
  bool has_tables() const { return tables_; }

  Poly reduce(const Poly& x) const { return r_ == 0 ? Poly::zero(f_) : x % fm_; }

  u64 residue_index(const Poly& x) const { return reduce(x).index_below(r_); }
  Poly residue_at(u64 idx) const { return Poly::from_index(f_, idx, r_); }

  bool is_unit_residue(u64 idx) const {
    if (tables_) return inv_[idx] >= 0;
    if (r_ == 0) return true;
    return gcd_is_one(residue_at(idx));
  }

  bool coprime(const Poly& x) const {
    if (r_ == 0) return true;
    if (x.is_zero()) return false;
    return gcd_is_one(x);
  }

  // index of the inverse residue; NotInvertible on non-units
  u64 inverse_index(u64 idx) const {
    if (tables_) {
      i64 v = inv_[idx];
      if (v < 0) fail(Errc::NotInvertible, "residue is not invertible");
      return u64(v);
    }
    return mod_inverse_poly(residue_at(idx)).index_below(r_);
  }

  Poly mod_inverse_poly(const Poly& x) const {
    if (r_ == 0) return Poly::zero(f_);
    auto [g, s, t] = xgcd(reduce(x), fm_);
    (void)t;
    if (!g.is_one()) fail(Errc::NotInvertible, "gcd(x, F) != 1");
    return reduce(s);
  }

  u64 mulmod_index(u64 a, u64 b) const {
    if (r_ == 0) return 0;
    return residue_index(residue_at(a) * residue_at(b));
  }

  u64 addmod_index(u64 a, u64 b) const {
    if (r_ == 0) return 0;
    const Gf& f = *f_;
    u64 q = u64(f.q());
    u64 out = 0, m = 1;
    for (int i = 0; i < r_; ++i) {
      out += u64(f.add(u32(a % q), u32(b % q))) * m;
      a /= q; b /= q;
      m *= q;
    }
    return out;
  }

  // unit residues in ascending index order; size phi(F)
  const std::vector<u64>& units() const {
    if (!tables_) fail(Errc::ResourceLimit, "unit list beyond table budget");
    return units_;
  }

  // e_F evaluated on residues: exponent in [0, p) of the p-th root of unity.
  // For monic F and deg y < r this is Tr of the coefficient of T^(r-1),
  // which equals the T^(-1) Laurent coefficient of y/F.
  int exponent_of_residue(u64 idx) const {
    if (r_ == 0) return 0;
    u32 top = u32(idx / top_pow_);
    if (unit_ != 1) top = f_->mul(unit_inv_, top);
    return f_->trace(top);
  }

  int residue_exponent(const Poly& x) const { return exponent_of_residue(residue_index(x)); }

 private:
  void build_tables() {
    tables_ = true;
    if (r_ == 0) {
      inv_.assign(1, 0);
      units_.assign(1, 0);
      return;
    }
    inv_.assign(states_, -1);
    units_.reserve(size_t(phi_));
    for (i64 i = 0; i < states_; ++i) {
      if (inv_[i] != -1) { units_.push_back(u64(i)); continue; }  // filled as someone's inverse
      Poly x = residue_at(u64(i));
      if (x.is_zero()) continue;
      auto [g, s, t] = xgcd(x, fm_);
      (void)t;
      if (!g.is_one()) continue;
      u64 j = reduce(s).index_below(r_);
      inv_[i] = i64(j);
      inv_[j] = i64(i);
      units_.push_back(u64(i));
    }
  }

  bool gcd_is_one(const Poly& x) const { return gcd(x, fm_).is_one(); }

  GfPtr f_;
  Poly fm_;
  u32 unit_ = 1;
  u32 unit_inv_ = 1;
  int r_ = 0;
  Factorization fac_;
  i64 phi_ = 1;
  i64 states_ = 1;
  bool tables_ = false;
  std::vector<i64> inv_;
  std::vector<u64> units_;
  u64 top_pow_ = 1;
};

// mod_inverse as a free operation: x-bar with x*x-bar == 1 (mod F), deg < r.
inline Poly mod_inverse(const Poly& x, const Modulus& F) { return F.mod_inverse_poly(x); }

// The exponent of e_F(c * y) is linear in the residue y. This precomputes
// kappa_i = the top coefficient of c*T^i mod F (unit-adjusted), so that
// exponent(y) = sum_i Tr(y_i * kappa_i) costs O(r) per residue.
class CharLinearForm {
 public:
  CharLinearForm(const Modulus& F, const Poly& multiplier) : f_(F.field()), r_(F.r()) {
    const Gf& gf = *f_;
    q_ = u64(gf.q());
    kappa_.assign(std::max(r_, 1), 0);
    if (r_ == 0) return;
    Poly c = F.reduce(multiplier);
    if (F.lead_unit() != 1) c = c.scaled(gf.inv(F.lead_unit()));
    Poly cti = c;
    for (int i = 0; i < r_; ++i) {
      kappa_[i] = cti.coeff(r_ - 1);
      cti = F.reduce(cti.shifted(1));
    }
  }

  int exponent_of_index(u64 idx) const {
    if (r_ == 0) return 0;
    const Gf& gf = *f_;
    int p = gf.p();
    int acc = 0;
    for (int i = 0; i < r_; ++i) {
      u32 d = u32(idx % q_);
      idx /= q_;
      if (d != 0 && kappa_[i] != 0) acc += gf.trace(gf.mul(d, kappa_[i]));
    }
    return acc % p;
  }

 private:
  GfPtr f_;
  int r_;
  u64 q_;
  std::vector<u32> kappa_;
};

struct ModReduction {
  Poly a0;
  std::shared_ptr<Modulus> F0;
  int d = 0;
};

// (a, F) -> (a0, F0, d) with F0 = F/(a,F), a0 = a/(a,F), d = deg(a,F); the
// convention gcd(0, F) = F makes the map total (then F0 = 1, d = r).
inline ModReduction reduce_modulus(const Poly& a, const Modulus& F, const Budgets& budgets = Budgets::from_env()) {
  ModReduction out;
  Poly g = a.is_zero() ? F.poly() : gcd(a, F.poly());
  out.d = g.is_zero() ? 0 : g.degree();
  Poly f0 = (F.poly() / g).scaled(F.lead_unit());
  out.F0 = std::make_shared<Modulus>(f0, budgets);
  out.a0 = a.is_zero() ? Poly::zero(F.field()) : a / g;
  return out;
}

}  // namespace ffsum
