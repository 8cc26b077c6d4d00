#pragma once

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ffsum/io.hpp"

namespace ffsum {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SelftestConfig {
  int workers = 1;
  Budgets budgets = Budgets::from_env();
};

namespace selftest_detail {

inline std::vector<Poly> monic_moduli_up_to(const GfPtr& f, int rmax) {
  std::vector<Poly> out;
  for (int r = 1; r <= rmax; ++r) {
    RangeMonic range{f, r};
    for (u64 i = 0; i < range.size(); ++i) out.push_back(range.at(i));
  }
  return out;
}

inline int rmax_for(const GfPtr& f, i64 state_cap) {
  int r = 0;
  i64 s = f->q();
  while (s <= state_cap) { ++r; s *= f->q(); }
  return r;
}

// out[idx] = sum_i Tr(digit_i(idx) * kappa[i]) mod p for idx < q^len, via a
// one-pass DP on the top base-q digit
inline void additive_exponent_table(const Gf& f, const std::vector<u32>& kappa, int len,
                                    std::vector<u8>& out) {
  const u64 q = u64(f.q());
  const int p = f.p();
  u64 size = upow(q, len);
  out.assign(size, 0);
  if (len == 0) return;
  std::vector<u8> tm(size_t(len) * q, 0);
  for (int t = 0; t < len; ++t)
    for (u64 d = 1; d < q; ++d)
      if (kappa[t] != 0) tm[size_t(t) * q + d] = u8(f.trace(f.mul(u32(d), kappa[t])));
  int t = 0;
  u64 pt = 1;
  for (u64 idx = 1; idx < size; ++idx) {
    while (idx >= pt * q) { pt *= q; ++t; }
    u64 top = idx / pt;
    out[idx] = u8((out[idx - top * pt] + tm[size_t(t) * q + top]) % p);
  }
}

// 1. Rosen identity: sum of mu over M_n is -q at n = 1 and 0 for n in [2, 6]
inline CheckResult check_rosen(const SelftestConfig& cfg) {
  CheckResult res{1, "rosen-mertens (q in {3,5,9}, n <= 6)"};
  std::ostringstream detail;
  res.pass = true;
  for (auto spec : {std::pair{3, 1}, {5, 1}, {3, 2}}) {
    GfPtr f = Gf::make(spec.first, spec.second);
    // split the monic range into blocks so workers never change the totals
    for (int n = 1; n <= 6; ++n) {
      u64 size = upow(u64(f->q()), n);
      u64 blocks = std::min<u64>(64, size);
      u64 step = (size + blocks - 1) / blocks;
      auto parts = parallel_map<i64>(blocks, cfg.workers, [&](u64 b) {
        detail::FactorScratch scratch(f);
        u64 lo = b * step, hi = std::min(size, lo + step);
        std::vector<u32> buf(n + 1);
        i64 acc = 0;
        u64 q = u64(f->q());
        for (u64 idx = lo; idx < hi; ++idx) {
          u64 v = idx;
          for (int i = 0; i < n; ++i) { buf[i] = u32(v % q); v /= q; }
          buf[n] = 1;
          acc += scratch.mu(buf, n);
        }
        return acc;
      });
      i64 total = 0;
      for (i64 v : parts) total += v;
      i64 expect = n == 1 ? -f->q() : 0;
      if (total != expect) {
        res.pass = false;
        detail << "q=" << f->q() << " n=" << n << ": got " << total << " want " << expect << "; ";
      }
    }
  }
  res.detail = detail.str();
  return res;
}

// 2. prime-polynomial identity: sum of Lambda over M_n equals q^n
inline CheckResult check_lambda_total(const SelftestConfig& cfg) {
  CheckResult res{2, "prime-polynomial identity (q in {3,5}, n <= 6)"};
  std::ostringstream detail;
  res.pass = true;
  for (int p : {3, 5}) {
    GfPtr f = Gf::make(p, 1);
    for (int n = 1; n <= 6; ++n) {
      i64 total = lambda_total(f, n);
      if (total != ipow(f->q(), n)) {
        res.pass = false;
        detail << "q=" << p << " n=" << n << ": got " << total << "; ";
      }
    }
  }
  (void)cfg;
  res.detail = detail.str();
  return res;
}

// 3. orthogonality of e_F on short ranges, exhaustively over q = 3, r <= 4
inline CheckResult check_orthogonality(const SelftestConfig& cfg) {
  CheckResult res{3, "orthogonality (q=3, monic F with r <= 4)"};
  GfPtr f = Gf::make(3, 1);
  auto moduli = monic_moduli_up_to(f, 4);
  auto bad = parallel_map<i64>(moduli.size(), cfg.workers, [&](u64 i) {
    Modulus F(moduli[i], cfg.budgets);
    i64 fails = 0;
    for (i64 ai = 0; ai < F.states(); ++ai) {
      Poly a = F.residue_at(u64(ai));
      for (int n = 1; n <= F.r(); ++n) {
        ExpHistogram h = linear_phase_sum(F, a, n);
        bool main_regime = a.degree() < F.r() - n;  // deg 0 sentinel handles a = 0
        bool ok = main_regime ? h.is_integer_at_zero(ipow(3, n))
                              : h.is_value_zero();
        if (!ok) ++fails;
      }
    }
    return fails;
  });
  i64 total = 0;
  for (i64 v : bad) total += v;
  res.pass = total == 0;
  if (!res.pass) res.detail = std::to_string(total) + " (F, a, n) triples failed";
  return res;
}

// 4. character laws: additivity, well-definedness, non-triviality, transport.
// All inner loops work on packed residue indices; every Modulus for a reduced
// F0 = F/(a,F) is built once per divisor, not once per a.
inline CheckResult check_character_laws(const SelftestConfig& cfg) {
  CheckResult res{4, "character laws incl. modulus reduction (q in {3,9}, q^r <= 729)"};
  std::ostringstream detail;
  res.pass = true;
  for (auto spec : {std::pair{3, 1}, {3, 2}}) {
    GfPtr f = Gf::make(spec.first, spec.second);
    const int p = f->p();
    const u64 q = u64(f->q());
    int rmax = rmax_for(f, 729);
    auto moduli = monic_moduli_up_to(f, rmax);
    auto bad = parallel_map<i64>(moduli.size(), cfg.workers, [&](u64 mi) {
      Modulus F(moduli[mi], cfg.budgets);
      const int r = F.r();
      const int dims = r * f->ell();
      const u64 states = u64(F.states());
      i64 fails = 0;
      std::vector<int> expo(states);
      for (u64 x = 0; x < states; ++x) expo[x] = F.exponent_of_residue(x);
      // additivity over all residue pairs
      for (u64 x = 0; x < states; ++x)
        for (u64 y = x; y < states; ++y) {
          u64 z = detail::index_add_base_p(x, y, p, dims);
          if (expo[z] != (expo[x] + expo[y]) % p) ++fails;
        }
      // non-triviality
      bool nontrivial = false;
      for (u64 x = 0; x < states && !nontrivial; ++x) nontrivial = expo[x] != 0;
      if (!nontrivial) ++fails;
      detail::IndexReducer reducer(F);
      // well-definedness on deg x < 2r (r <= 3): the ambient additive form
      // against reduce-then-read
      if (r <= 3) {
        std::vector<u32> kappa(2 * r);
        Poly ti = Poly::one(f);
        for (int i = 0; i < 2 * r; ++i) {
          kappa[i] = F.reduce(ti).coeff(r - 1);
          ti = ti.shifted(1);
        }
        auto residx = reducer.reduce_range(2 * r);
        std::vector<u8> ambient;
        additive_exponent_table(*f, kappa, 2 * r, ambient);
        for (u64 xi = 0; xi < residx.size(); ++xi)
          if (int(ambient[xi]) != expo[residx[xi]]) ++fails;
      }
      // transport: for each monic divisor g | F build F0 = F/g once, with the
      // residue projection and per-unit linear forms in the phase multiplier
      struct Reduced {
        u64 g_index;
        std::unique_ptr<Modulus> F0;
        std::unique_ptr<detail::IndexReducer> project;
        std::vector<u64> redmap;        // residue mod F -> residue mod F0
        std::vector<u32> kappa0;        // [w0 * r0 + i] linear form of w0
      };
      std::vector<Reduced> reductions;
      for (const Poly& g : monic_divisors(F.factorization(), f)) {
        Reduced red;
        red.g_index = g.index_below(r + 1);
        red.F0 = std::make_unique<Modulus>(F.poly() / g, cfg.budgets);
        const Modulus& F0 = *red.F0;
        int r0 = F0.r();
        red.project = std::make_unique<detail::IndexReducer>(F0);
        red.redmap.assign(states, 0);
        if (r0 >= 1) {
          auto full = red.project->reduce_range(r);
          red.redmap = std::move(full);
        }
        red.kappa0.assign(size_t(F0.states()) * std::max(1, r0), 0);
        for (i64 w0 = 0; w0 < F0.states(); ++w0) {
          u64 cur = u64(w0);
          for (int i = 0; i < r0; ++i) {
            red.kappa0[size_t(w0) * r0 + i] = u32(cur / upow(q, r0 - 1));
            cur = red.project->step(cur, 0);
          }
        }
        reductions.push_back(std::move(red));
      }
      // classify every a once: which divisor gcd(a, F) selects, and the
      // packed index of a0 = a / gcd
      std::vector<u32> div_of_a(states, 0), a0_of_a(states, 0);
      for (u64 ai = 0; ai < states; ++ai) {
        Poly a = F.residue_at(ai);
        Poly g = a.is_zero() ? F.poly() : gcd(a, F.poly());
        u64 gidx = g.index_below(r + 1);
        u32 pos = u32(reductions.size());
        for (u32 c = 0; c < reductions.size(); ++c)
          if (reductions[c].g_index == gidx) { pos = c; break; }
        if (pos == reductions.size()) { ++fails; continue; }
        div_of_a[ai] = pos;
        int r0 = reductions[pos].F0->r();
        a0_of_a[ai] = a.is_zero() ? 0 : u32((a / g).index_below(std::max(1, r0)));
      }
      // for each unit x: tabulate a -> e_F(a inv(x)) and, per divisor,
      // a0 -> e_F0(a0 inv(x) mod F0); then sweep a
      const auto& units = F.units();
      std::vector<u32> kappa1(r);
      std::vector<u8> e1_table;
      std::vector<std::vector<u8>> e0_tables(reductions.size());
      for (size_t ui = 0; ui < units.size(); ++ui) {
        u64 xinv = F.inverse_index(units[ui]);
        u64 cur = xinv;
        for (int i = 0; i < r; ++i) {
          kappa1[i] = u32(cur / upow(q, u32(r - 1)));
          cur = reducer.step(cur, 0);
        }
        additive_exponent_table(*f, kappa1, r, e1_table);
        for (size_t c = 0; c < reductions.size(); ++c) {
          const Reduced& red = reductions[c];
          int r0 = red.F0->r();
          if (r0 == 0) { e0_tables[c].assign(1, 0); continue; }
          u64 w0 = red.redmap[xinv];
          std::vector<u32> kappa0(r0);
          for (int i = 0; i < r0; ++i) kappa0[i] = red.kappa0[size_t(w0) * r0 + i];
          additive_exponent_table(*f, kappa0, r0, e0_tables[c]);
        }
        for (u64 ai = 0; ai < states; ++ai) {
          if (int(e1_table[ai]) != int(e0_tables[div_of_a[ai]][a0_of_a[ai]])) ++fails;
        }
      }
      return fails;
    });
    i64 total = 0;
    for (i64 v : bad) total += v;
    if (total != 0) {
      res.pass = false;
      detail << "q=" << f->q() << ": " << total << " violations; ";
    }
  }
  res.detail = detail.str();
  return res;
}

// 5. Weil bound for complete Kloosterman sums over irreducible moduli
inline CheckResult check_weil(const SelftestConfig& cfg) {
  CheckResult res{5, "Weil bound (irreducible F, q in {3,5}, r <= 3)"};
  std::ostringstream detail;
  res.pass = true;
  for (int pch : {3, 5}) {
    GfPtr f = Gf::make(pch, 1);
    for (int r = 1; r <= 3; ++r) {
      std::vector<Poly> irred;
      RangeMonic range{f, r};
      for (u64 i = 0; i < range.size(); ++i)
        if (is_irreducible(range.at(i))) irred.push_back(range.at(i));
      auto worst = parallel_map<double>(irred.size(), cfg.workers, [&](u64 fi) {
        Modulus F(irred[fi], cfg.budgets);
        const auto& units = F.units();
        const int p = f->p();
        // exponent tables of a*x and b*inv(x) per unit a, b
        size_t nu = units.size();
        std::vector<int> ea(nu * nu), eb(nu * nu);
        for (size_t ai = 0; ai < nu; ++ai) {
          CharLinearForm la(F, F.residue_at(units[ai]));
          for (size_t xi = 0; xi < nu; ++xi) {
            ea[ai * nu + xi] = la.exponent_of_index(units[xi]);
            eb[ai * nu + xi] = la.exponent_of_index(F.inverse_index(units[xi]));
          }
        }
        double worst_abs = 0;
        ExpHistogram h(p);
        for (size_t ai = 0; ai < nu; ++ai)
          for (size_t bi = 0; bi < nu; ++bi) {
            ExpHistogram hh(p);
            const int* ra = &ea[ai * nu];
            const int* rb = &eb[bi * nu];
            for (size_t xi = 0; xi < nu; ++xi) hh.add((ra[xi] + rb[xi]) % p);
            worst_abs = std::max(worst_abs, hh.abs());
          }
        (void)h;
        return worst_abs;
      });
      double bound = 2.0 * std::pow(double(f->q()), r / 2.0) + 1e-6;
      for (size_t i = 0; i < worst.size(); ++i)
        if (worst[i] > bound) {
          res.pass = false;
          detail << "q=" << pch << " F=" << irred[i].str() << ": |K|=" << worst[i] << "; ";
        }
    }
  }
  res.detail = detail.str();
  return res;
}

// 6. moment identity sum_lambda |T|^2k = q^r E, within 1e-9 relative
inline CheckResult check_moment(const SelftestConfig& cfg) {
  CheckResult res{6, "moment identity (q^r <= 243, k <= 2, n <= r)"};
  std::ostringstream detail;
  res.pass = true;
  for (auto spec : {std::pair{3, 1}, {5, 1}, {3, 2}}) {
    GfPtr f = Gf::make(spec.first, spec.second);
    auto moduli = monic_moduli_up_to(f, rmax_for(f, 243));
    auto bad = parallel_map<i64>(moduli.size(), cfg.workers, [&](u64 i) {
      Modulus F(moduli[i], cfg.budgets);
      i64 fails = 0;
      for (int k = 1; k <= 2; ++k)
        for (int n = 0; n <= F.r(); ++n) {
          MomentReport rep = moment_identity_check(F, k, n, cfg.budgets);
          if (rep.rel_dev > 1e-9) ++fails;
        }
      return fails;
    });
    i64 total = 0;
    for (i64 v : bad) total += v;
    if (total != 0) {
      res.pass = false;
      detail << "q=" << f->q() << ": " << total << " failures; ";
    }
  }
  // the worked instance: q = 3, F = T, k = 2, n = 1 has lhs 18 = 3 * 6
  GfPtr f3 = Gf::make(3, 1);
  Modulus MT(Poly::parse(f3, "T"), cfg.budgets);
  MomentReport rep = moment_identity_check(MT, 2, 1, cfg.budgets);
  if (rep.rhs != 18 || fabsl(rep.lhs - 18.0L) > 1e-9L) {
    res.pass = false;
    detail << "worked instance 18 = 3*6 failed; ";
  }
  res.detail = detail.str();
  return res;
}

// 7. energy oracle equivalence and modulus-average consistency
inline CheckResult check_energy_oracle(const SelftestConfig& cfg) {
  CheckResult res{7, "energy convolution vs brute force (q^r <= 81, k <= 2, n <= r)"};
  std::ostringstream detail;
  res.pass = true;
  for (auto spec : {std::pair{3, 1}, {5, 1}, {3, 2}}) {
    GfPtr f = Gf::make(spec.first, spec.second);
    auto moduli = monic_moduli_up_to(f, rmax_for(f, 81));
    auto bad = parallel_map<i64>(moduli.size(), cfg.workers, [&](u64 i) {
      Modulus F(moduli[i], cfg.budgets);
      i64 fails = 0;
      for (int k = 1; k <= 2; ++k)
        for (int n = 0; n <= F.r(); ++n) {
          i128 a = energy(F, k, n, cfg.budgets, false).E;
          i128 b = energy(F, k, n, cfg.budgets, true).E;
          if (a != b) ++fails;
          // the transform path must agree exactly as well
          ResidueDistribution d = inversion_distribution(F, n);
          auto direct = detail::self_convolve_direct(d.counts, k, f->p(), F.r() * f->ell());
          auto trans = detail::CycloTransform(f->p(), F.r() * f->ell()).self_convolve(d.counts, k);
          if (direct != trans) ++fails;
        }
      return fails;
    });
    i64 total = 0;
    for (i64 v : bad) total += v;
    if (total != 0) {
      res.pass = false;
      detail << "q=" << f->q() << ": " << total << " disagreements; ";
    }
  }
  // energy_avg equals the per-F brute-force sum at q = 3, r <= 2
  GfPtr f3 = Gf::make(3, 1);
  for (int r = 1; r <= 2; ++r)
    for (int k = 1; k <= 2; ++k)
      for (int n = 1; n <= 2; ++n) {
        i128 avg = energy_avg(f3, r, k, n, cfg.budgets, cfg.workers);
        i128 manual = 0;
        RangeMonic range{f3, r};
        for (u64 i = 0; i < range.size(); ++i)
          manual += energy(Modulus(range.at(i), cfg.budgets), k, n, cfg.budgets, true).E;
        if (avg != manual) {
          res.pass = false;
          detail << "energy_avg mismatch r=" << r << " k=" << k << " n=" << n << "; ";
        }
      }
  res.detail = detail.str();
  return res;
}

// 8. Vaughan recombination and the quadrant identity
inline CheckResult check_vaughan(const SelftestConfig& cfg) {
  CheckResult res{8, "Vaughan recombination (q=3, r <= 3, n <= 5) + quadrants"};
  std::ostringstream detail;
  res.pass = true;
  GfPtr f = Gf::make(3, 1);
  for (int d = 0; d <= 4; ++d) {
    RangeMonic range{f, d};
    for (u64 i = 0; i < range.size(); ++i)
      for (int k = 0; k <= 2; ++k)
        if (!quadrant_convolution_check(range.at(i), k).ok) {
          res.pass = false;
          detail << "quadrant identity failed at " << range.at(i).str() << " k=" << k << "; ";
        }
  }
  auto moduli = monic_moduli_up_to(f, 3);
  auto bad = parallel_map<i64>(moduli.size(), cfg.workers, [&](u64 i) {
    Modulus F(moduli[i], cfg.budgets);
    i64 fails = 0;
    for (u64 ai : F.units()) {
      Poly a = F.residue_at(ai);
      for (int n = 3; n <= 5; ++n)
        for (int U = 1; 2 * U < n; ++U) {
          VaughanSplit split = vaughan_decompose(F, a, n, U, cfg.budgets);
          if (!split.recombined().raw_equal(moebius_kloosterman(F, a, n))) ++fails;
          for (const auto& slice : split.type2) {
            RangeAllBelow zs{f, n - slice.v};
            for (u64 zi = 0; zi < zs.size(); ++zi) {
              Poly z = zs.at(zi);
              if (z.is_zero() || slice.beta[zi] == 0) continue;
              i64 cap = divisor_count(z);
              i64 b = slice.beta[zi] < 0 ? -slice.beta[zi] : slice.beta[zi];
              if (b > cap) ++fails;  // |beta_z| <= d(z)
            }
          }
        }
    }
    return fails;
  });
  i64 total = 0;
  for (i64 v : bad) total += v;
  if (total != 0) {
    res.pass = false;
    detail << total << " recombination/beta failures; ";
  }
  res.detail = detail.str();
  return res;
}

// 9. main-term lemma: exact-rational error within the exact tail bound
inline CheckResult check_main_term(const SelftestConfig& cfg) {
  CheckResult res{9, "main-term partial sums vs -q^r/phi(F) (q in {3,5}, r <= 2, d <= 14)"};
  std::ostringstream detail;
  res.pass = true;
  for (int pch : {3, 5}) {
    GfPtr f = Gf::make(pch, 1);
    for (const Poly& fp : monic_moduli_up_to(f, 2)) {
      Modulus F(fp, cfg.budgets);
      Rational prev_tail;
      bool have_prev = false;
      for (int d = 1; d <= 14; ++d) {
        MainTermReport rep = main_term_check(F, d);
        if (d >= F.r() + 1 && !(rep.error.abs() <= rep.tail)) {
          res.pass = false;
          detail << "q=" << pch << " F=" << fp.str() << " d=" << d << ": error beyond tail; ";
        }
        if (have_prev && !(rep.tail <= prev_tail)) {
          res.pass = false;
          detail << "q=" << pch << " F=" << fp.str() << " d=" << d << ": tail not monotone; ";
        }
        prev_tail = rep.tail;
        have_prev = true;
        if (d == 14 && !(rep.tail < Rational(1, 1000))) {
          res.pass = false;
          detail << "q=" << pch << " F=" << fp.str() << ": tail(14) not < 1/1000; ";
        }
      }
    }
  }
  // the hand value: q = 3, F = T, d = 1 has error exactly 5/6
  GfPtr f3 = Gf::make(3, 1);
  Modulus MT(Poly::parse(f3, "T"), cfg.budgets);
  if (main_term_check(MT, 1).error != Rational(5, 6)) {
    res.pass = false;
    detail << "hand value error(1) != 5/6; ";
  }
  res.detail = detail.str();
  return res;
}

// 10. progression sums partition the coprime Lambda total; frozen q=3 row
inline CheckResult check_ap_conservation(const SelftestConfig& cfg) {
  CheckResult res{10, "progression conservation (q in {3,5}, r <= 2, n <= 5)"};
  std::ostringstream detail;
  res.pass = true;
  for (int pch : {3, 5}) {
    GfPtr f = Gf::make(pch, 1);
    auto moduli = monic_moduli_up_to(f, 2);
    auto bad = parallel_map<i64>(moduli.size(), cfg.workers, [&](u64 i) {
      Modulus F(moduli[i], cfg.budgets);
      i64 fails = 0;
      for (int n = 1; n <= 5; ++n) {
        auto rows = ap_lambda_discrepancy(F, n, cfg.budgets);  // enforces the partition
        i64 row_total = 0;
        for (auto& row : rows) row_total += row.ap_sum;
        // independent total over the coprime monic range
        i64 direct = 0;
        RangeMonic range{f, n};
        for (u64 xi = 0; xi < range.size(); ++xi) {
          Poly x = range.at(xi);
          if (F.coprime(x)) direct += von_mangoldt(x);
        }
        if (row_total != direct) ++fails;
      }
      return fails;
    });
    i64 total = 0;
    for (i64 v : bad) total += v;
    if (total != 0) {
      res.pass = false;
      detail << "q=" << pch << ": " << total << " conservaton failures; ";
    }
  }
  GfPtr f3 = Gf::make(3, 1);
  Modulus MT(Poly::parse(f3, "T"), cfg.budgets);
  auto rows = ap_lambda_discrepancy(MT, 2, cfg.budgets);
  bool found = false;
  for (auto& row : rows)
    if (row.a == "1") found = row.ap_sum == 4 && row.delta == Rational(-1, 2);
  if (!found) {
    res.pass = false;
    detail << "frozen row (F=T, n=2, a=1) mismatch; ";
  }
  res.detail = detail.str();
  return res;
}

// shared table battery for the determinism and production criteria
inline std::vector<std::pair<std::string, std::string>> build_tables(int workers,
                                                                     const Budgets& budgets,
                                                                     u64 seed) {
  std::vector<std::pair<std::string, std::string>> out;
  GfPtr f3 = Gf::make(3, 1);
  GfPtr f5 = Gf::make(5, 1);

  {  // energy sweep
    std::vector<EnergyRecord> recs;
    for (int r = 1; r <= 2; ++r) {
      RangeMonic range{f3, r};
      auto rows = parallel_map<EnergyRecord>(range.size(), workers, [&](u64 i) {
        Modulus F(range.at(i), budgets);
        EnergyRecord rec = energy(F, 2, std::min(2, F.r()), budgets);
        rec.seconds = 0;  // timings stay out of byte-compared tables
        return rec;
      });
      for (auto& r2 : rows) recs.push_back(std::move(r2));
    }
    out.emplace_back("energy.csv", to_csv(energy_table(recs, f3->spec_string())));
  }
  {  // bilinear ratio scans, unit and seeded random weights
    BilinearScanConfig cfg;
    cfg.field = f3;
    for (int r = 1; r <= 2; ++r) {
      RangeMonic range{f3, r};
      for (u64 i = 0; i < range.size(); ++i) cfg.moduli.push_back(range.at(i));
    }
    cfg.a_values = {Poly::one(f3)};
    cfg.ms = {1, 2};
    cfg.ns = {1, 2};
    cfg.workers = workers;
    cfg.budgets = budgets;
    auto rows = bilinear_ratio_scan(cfg);
    cfg.weight_source = "random_pm1";
    cfg.seed = seed;
    auto rows2 = bilinear_ratio_scan(cfg);
    for (auto& r2 : rows2) rows.push_back(std::move(r2));
    rows.push_back(bilinear_avg_row(f3, 1, 1, 1, 2, budgets, workers));
    rows.push_back(bilinear_avg_row(f3, 2, 2, 2, 2, budgets, workers));
    out.emplace_back("ratio_bilinear.csv", to_csv(ratio_table(rows)));
  }
  {  // Moebius scans: per-modulus and modulus-averaged
    MoebiusScanConfig cfg;
    cfg.field = f3;
    for (int r = 1; r <= 2; ++r) {
      RangeMonic range{f3, r};
      for (u64 i = 0; i < range.size(); ++i) cfg.moduli.push_back(range.at(i));
    }
    cfg.ns = {1, 2, 3, 4};
    cfg.workers = workers;
    cfg.budgets = budgets;
    auto rows = moebius_ratio_scan(cfg);
    for (int r = 1; r <= 2; ++r)
      for (int n = 2; n <= 4; ++n) rows.push_back(moebius_avg_row(f3, r, n, budgets, workers));
    out.emplace_back("ratio_moebius.csv", to_csv(ratio_table(rows)));
  }
  {  // progressions and the modulus-averaged discrepancy
    std::vector<DiscrepancyRow> rows;
    for (const GfPtr& f : {f3, f5})
      for (const Poly& fp : monic_moduli_up_to(f, 2))
        for (int n = 1; n <= 3; ++n) {
          Modulus F(fp, budgets);
          for (auto& row : ap_lambda_discrepancy(F, n, budgets)) rows.push_back(std::move(row));
        }
    out.emplace_back("ap_dist.csv", to_csv(discrepancy_table(rows)));
    BvReport rep = bombieri_vinogradov_sum(f3, 3, 3, budgets, workers);
    out.emplace_back("bv.csv", to_csv(bv_table(rep)));
  }
  {  // main-term reports
    std::vector<MainTermReport> reps;
    for (const Poly& fp : monic_moduli_up_to(f3, 2))
      for (int d : {4, 10, 14}) reps.push_back(main_term_check(Modulus(fp, budgets), d));
    out.emplace_back("main_term.csv", to_csv(main_term_table(reps)));
  }
  return out;
}

// 11. byte-identical tables across worker counts 1 and 4
inline CheckResult check_determinism(const SelftestConfig& cfg) {
  CheckResult res{11, "deterministic tables across worker counts {1, 4}"};
  std::ostringstream detail;
  res.pass = true;
  auto t1 = build_tables(1, cfg.budgets, 42);
  auto t4 = build_tables(4, cfg.budgets, 42);
  for (size_t i = 0; i < t1.size(); ++i) {
    if (t1[i].second != t4[i].second) {
      res.pass = false;
      detail << t1[i].first << " differs; ";
    }
  }
  res.detail = detail.str();
  return res;
}

// 12. ratio tables produced with populated observed-delta columns
inline CheckResult check_tables_produced(const SelftestConfig& cfg) {
  CheckResult res{12, "ratio/discrepancy tables produced with observed-delta columns"};
  std::ostringstream detail;
  res.pass = true;
  auto tables = build_tables(cfg.workers, cfg.budgets, 42);
  if (tables.size() != 6) {
    res.pass = false;
    detail << "expected 6 tables; ";
  }
  for (auto& [name, csv] : tables) {
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    if (lines < 2) {
      res.pass = false;
      detail << name << " has no data rows; ";
    }
  }
  // delta columns populated whenever the magnitude is nonzero
  GfPtr f3 = Gf::make(3, 1);
  MoebiusScanConfig mc;
  mc.field = f3;
  mc.moduli = {Poly::parse(f3, "T^2"), Poly::parse(f3, "T^2+1")};
  mc.ns = {2, 3, 4};
  mc.budgets = cfg.budgets;
  mc.workers = cfg.workers;
  for (auto& row : moebius_ratio_scan(mc)) {
    if (row.lhs_abs > 1e-9 && std::isnan(row.observed_delta)) {
      res.pass = false;
      detail << "missing observed delta at F=" << row.F << " n=" << row.n << "; ";
    }
  }
  res.detail = detail.str();
  return res;
}

}  // namespace selftest_detail

inline std::vector<CheckResult> run_acceptance(const SelftestConfig& cfg) {
  using namespace selftest_detail;
  std::vector<std::function<CheckResult(const SelftestConfig&)>> checks = {
      check_rosen,        check_lambda_total, check_orthogonality, check_character_laws,
      check_weil,         check_moment,       check_energy_oracle, check_vaughan,
      check_main_term,    check_ap_conservation, check_determinism, check_tables_produced,
  };
  std::vector<CheckResult> out;
  for (auto& fn : checks) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult res = fn(cfg);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace ffsum
