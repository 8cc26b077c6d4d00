#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "ffsum/energy.hpp"
#include "ffsum/vaughan.hpp"

namespace ffsum {

inline double log_q(double x, i64 q) { return std::log(x) / std::log(double(q)); }

// ---------------------------------------------------------------------------
// ratio rows

struct RatioRow {
  std::string theorem;
  std::string field;
  std::string F;  // or "deg=r monic" for modulus-averaged rows
  std::string a;
  i64 q = 0;
  int r = 0, m = 0, n = 0, k = 0;
  std::string weights;  // unit | random_pm1:seed | file
  double lhs_abs = 0;
  double trivial_bound = 0;
  double theorem_bound = 0;   // NaN when the statement has no effective bound
  double ratio = 0;           // lhs / trivial
  double observed_delta = 0;  // -log_q(ratio) / r, NaN when lhs == 0
  double holder_lhs = 0;      // |S|^(2k)
  double holder_rhs = 0;      // q^(m(2k-1) + max(0, m-r) + r) * E_k(n)
  double energy_rhs_k22 = 0;  // two-sided energy bound with k1 = k2 = 2
};

inline i64 coprime_mass(const Modulus& F, int bound) {
  i64 copies = bound > F.r() ? ipow(F.gf().q(), bound - F.r()) : 1;
  u64 count = upow(u64(F.gf().q()), std::min(bound, F.r()));
  i64 mass = 0;
  for (u64 i = 0; i < count; ++i)
    if (F.is_unit_residue(i)) mass += copies;
  if (F.r() == 0) mass = ipow(F.gf().q(), bound);  // every residue counts mod 1
  return mass;
}

struct BilinearScanConfig {
  GfPtr field;
  std::vector<Poly> moduli;
  std::vector<Poly> a_values;
  std::vector<int> ms, ns;
  std::string weight_source = "unit";  // unit | random_pm1
  u64 seed = 1;
  int holder_k = 2;
  Budgets budgets = Budgets::from_env();
  int workers = 1;
};

inline RatioRow bilinear_ratio_row(const Modulus& F, const Poly& a, int m, int n,
                                   const WeightSeq& alpha, const WeightSeq& beta,
                                   const std::string& weights_label, int k,
                                   const Budgets& budgets) {
  if (!F.coprime(a)) fail(Errc::NotCoprime, "the bilinear experiment requires gcd(a, F) = 1");
  RatioRow row;
  row.theorem = "2.1";
  row.field = F.gf().spec_string();
  row.F = F.poly().str();
  row.a = a.str();
  row.q = F.gf().q();
  row.r = F.r();
  row.m = m;
  row.n = n;
  row.k = k;
  row.weights = weights_label;
  BilinearValue W = bilinear_kloosterman(F, a, m, n, alpha, beta, budgets);
  row.lhs_abs = W.abs();
  double mm = double(coprime_mass(F, m)), mn = double(coprime_mass(F, n));
  row.trivial_bound = mm * mn * alpha.max_abs() * beta.max_abs();
  row.theorem_bound = std::nan("");  // ineffective constants; delta is data
  row.ratio = row.trivial_bound > 0 ? row.lhs_abs / row.trivial_bound : 0;
  row.observed_delta =
      row.lhs_abs > 0 ? -log_q(row.ratio, row.q) / std::max(1, row.r) : std::nan("");
  // exact-energy companion bounds
  i128 Ekn = energy(F, k, n, budgets).E;
  long double lhs_pow = 1;
  for (int i = 0; i < 2 * k; ++i) lhs_pow *= (long double)(row.lhs_abs);
  int expo = m * (2 * k - 1) + std::max(0, m - F.r()) + F.r();
  long double rhs = powl((long double)(row.q), expo) * (long double)(Ekn);
  row.holder_lhs = double(lhs_pow);
  row.holder_rhs = double(rhs);
  if (alpha.max_abs() <= 1.0 + 1e-12 && beta.max_abs() <= 1.0 + 1e-12) {
    if (lhs_pow > rhs * (1.0L + 1e-6L) + 1e-6L)
      fail(Errc::InvariantViolation, "Holder chain bound violated");
    if (row.lhs_abs > row.trivial_bound + 1e-6)
      fail(Errc::InvariantViolation, "trivial bilinear bound violated");
  }
  i128 E2m = energy(F, 2, m, budgets).E, E2n = energy(F, 2, n, budgets).E;
  double lg = std::log2(double(row.q)) * (m + n) +
              (std::log2(double(E2m)) + std::log2(double(E2n)) +
               std::log2(double(row.q)) * (F.r() - 4.0 * m - 4.0 * n)) /
                  8.0;
  row.energy_rhs_k22 = std::exp2(lg);
  return row;
}

inline std::vector<RatioRow> bilinear_ratio_scan(const BilinearScanConfig& cfg) {
  struct Point { size_t fi, ai; int m, n; };
  std::vector<Point> grid;
  for (size_t fi = 0; fi < cfg.moduli.size(); ++fi)
    for (size_t ai = 0; ai < cfg.a_values.size(); ++ai)
      for (int m : cfg.ms)
        for (int n : cfg.ns) grid.push_back({fi, ai, m, n});
  auto rows = parallel_map<RatioRow>(grid.size(), cfg.workers, [&](u64 g) {
    const Point& pt = grid[g];
    Modulus F(cfg.moduli[pt.fi], cfg.budgets);
    std::string label = cfg.weight_source;
    WeightSeq alpha = WeightSeq::units(cfg.field, pt.m, cfg.budgets);
    WeightSeq beta = WeightSeq::units(cfg.field, pt.n, cfg.budgets);
    if (cfg.weight_source == "random_pm1") {
      alpha = WeightSeq::random_pm1(cfg.field, pt.m, cfg.seed, cfg.budgets);
      beta = WeightSeq::random_pm1(cfg.field, pt.n, cfg.seed + 1, cfg.budgets);
      label += ":" + std::to_string(cfg.seed);
    }
    return bilinear_ratio_row(F, cfg.a_values[pt.ai], pt.m, pt.n, alpha, beta, label,
                              cfg.holder_k, cfg.budgets);
  });
  return rows;
}

// modulus-averaged bilinear rows: sum over monic F of degree r of the worst
// coprime a, compared against the averaged-energy bound
inline RatioRow bilinear_avg_row(const GfPtr& f, int r, int m, int n, int k,
                                 const Budgets& budgets, int workers) {
  RangeMonic fr{f, r};
  auto worst = parallel_map<double>(fr.size(), workers, [&](u64 fi) {
    Modulus F(fr.at(fi), budgets);
    WeightSeq alpha = WeightSeq::units(f, m, budgets);
    WeightSeq beta = WeightSeq::units(f, n, budgets);
    double best = 0;
    for (u64 ai : F.units()) {
      Poly a = F.residue_at(ai);
      best = std::max(best, bilinear_kloosterman(F, a, m, n, alpha, beta, budgets).abs());
    }
    return best;
  });
  RatioRow row;
  row.theorem = "2.1-avg";
  row.field = f->spec_string();
  row.F = "deg=" + std::to_string(r) + " monic";
  row.a = "max coprime";
  row.q = f->q();
  row.r = r;
  row.m = m;
  row.n = n;
  row.k = k;
  row.weights = "unit";
  for (double v : worst) row.lhs_abs += v;
  Modulus F0(fr.at(0), budgets);
  double mass_bound = double(ipow(f->q(), m)) * double(ipow(f->q(), n));
  row.trivial_bound = double(fr.size()) * mass_bound;
  row.ratio = row.lhs_abs / row.trivial_bound;
  row.observed_delta = row.lhs_abs > 0 ? -log_q(row.ratio, row.q) / r : std::nan("");
  i128 Esum = 0;
  for (u64 fi = 0; fi < fr.size(); ++fi) Esum += energy(Modulus(fr.at(fi), budgets), k, n, budgets).E;
  double lg = std::log2(double(f->q())) *
                  ((m + r) * (2.0 * k - 1) / (2.0 * k) + std::max(m, r) / (2.0 * k)) +
              std::log2(double(Esum)) / (2.0 * k);
  row.holder_rhs = std::exp2(lg);
  row.holder_lhs = row.lhs_abs;
  row.theorem_bound = std::nan("");
  return row;
}

// ---------------------------------------------------------------------------
// Moebius sum scans (theorems 2.2/2.3 per modulus, 2.4 averaged)

struct MoebiusScanConfig {
  GfPtr field;
  std::vector<Poly> moduli;
  std::vector<int> ns;
  std::string a_policy = "worst_over_all_a";  // or "fixed"
  std::vector<Poly> fixed_a;
  Budgets budgets = Budgets::from_env();
  int workers = 1;
};

// scans a over every residue mod F (the worst case includes non-coprime a)
inline std::pair<double, u64> worst_moebius_abs(const Modulus& F, int n) {
  // precompute per-term (inverse index, mu) once, then sweep a
  std::vector<std::pair<u64, int>> terms;
  RangeAllBelow range{F.field(), n};
  for (u64 i = 0; i < range.size(); ++i) {
    Poly x = range.at(i);
    if (x.is_zero()) continue;
    u64 res = F.residue_index(x);
    if (!F.is_unit_residue(res)) continue;
    int mu = moebius(x);
    if (mu != 0) terms.emplace_back(F.inverse_index(res), mu);
  }
  double best = -1;
  u64 best_a = 0;
  for (i64 ai = 0; ai < F.states(); ++ai) {
    CharLinearForm la(F, F.residue_at(u64(ai)));
    ExpHistogram h(F.gf().p());
    for (auto& [vi, mu] : terms) h.add(la.exponent_of_index(vi), mu);
    double v = h.abs();
    if (v > best + 1e-12) { best = v; best_a = u64(ai); }
  }
  return {best, best_a};
}

inline double moebius_bound_23(i64 q, int r, int n) {
  double e1 = 15.0 * n / 16.0;
  double e2 = 2.0 * n / 3.0 + r / 4.0;
  return std::pow(double(q), std::max(e1, e2));
}

inline std::vector<RatioRow> moebius_ratio_scan(const MoebiusScanConfig& cfg) {
  struct Point { size_t fi; int n; };
  std::vector<Point> grid;
  for (size_t fi = 0; fi < cfg.moduli.size(); ++fi)
    for (int n : cfg.ns) grid.push_back({fi, n});
  return parallel_map<RatioRow>(grid.size(), cfg.workers, [&](u64 g) {
    const Point& pt = grid[g];
    Modulus F(cfg.moduli[pt.fi], cfg.budgets);
    RatioRow row;
    row.theorem = "2.3";
    row.field = F.gf().spec_string();
    row.F = F.poly().str();
    row.q = F.gf().q();
    row.r = F.r();
    row.n = pt.n;
    row.weights = "moebius";
    if (cfg.a_policy == "fixed") {
      const Poly& a = cfg.fixed_a.at(pt.fi % std::max<size_t>(1, cfg.fixed_a.size()));
      row.a = a.str();
      row.lhs_abs = moebius_kloosterman(F, a, pt.n).abs();
    } else {
      auto [best, best_a] = worst_moebius_abs(F, pt.n);
      row.a = F.residue_at(best_a).str();
      row.lhs_abs = best;
    }
    row.trivial_bound = std::pow(double(row.q), pt.n);
    row.theorem_bound = moebius_bound_23(row.q, row.r, pt.n);
    row.ratio = row.lhs_abs / row.trivial_bound;
    row.observed_delta =
        row.lhs_abs > 0 ? -log_q(row.ratio, row.q) / std::max(1, row.r) : std::nan("");
    return row;
  });
}

// theorem 2.4 shape: sum over monic F of degree r of the worst a
inline RatioRow moebius_avg_row(const GfPtr& f, int r, int n, const Budgets& budgets,
                                int workers) {
  RangeMonic fr{f, r};
  auto worst = parallel_map<double>(fr.size(), workers, [&](u64 fi) {
    Modulus F(fr.at(fi), budgets);
    return worst_moebius_abs(F, n).first;
  });
  RatioRow row;
  row.theorem = "2.4";
  row.field = f->spec_string();
  row.F = "deg=" + std::to_string(r) + " monic";
  row.a = "max over residues";
  row.q = f->q();
  row.r = r;
  row.n = n;
  row.weights = "moebius";
  for (double v : worst) row.lhs_abs += v;
  row.trivial_bound = double(fr.size()) * std::pow(double(row.q), n);
  double qd = double(row.q);
  row.theorem_bound = std::pow(qd, double(r)) *
                      (std::pow(qd, 9.0 * n / 10.0) + std::pow(qd, r / 6.0 + 13.0 * n / 18.0) +
                       std::pow(qd, 13.0 * n / 8.0 - 5.0 * r / 6.0));
  row.ratio = row.lhs_abs / row.trivial_bound;
  row.observed_delta = row.lhs_abs > 0 ? -log_q(row.ratio, row.q) / r : std::nan("");
  return row;
}

// ---------------------------------------------------------------------------
// prime-polynomial distribution in progressions

struct DiscrepancyRow {
  std::string field;
  i64 q = 0;
  std::string F;
  int r = 0, n = 0;
  std::string a;
  i64 ap_sum = 0;
  Rational main_term;
  Rational delta;
  bool inside_hypothesis = false;
  double threshold_q = 0;
};

// advisory hypothesis check: omega = r/n against the fixed-progression range
inline std::pair<bool, double> ap_admissible(int p, i64 q, int r, int n) {
  double omega = double(r) / double(n);
  if (!(omega < 16.0 / 31.0)) return {false, std::nan("")};
  double thr = double(p) * p * std::exp(2.0) * std::pow((16.0 - omega) / (16.0 - 31.0 * omega), 2.0);
  return {double(q) > thr, thr};
}

inline std::pair<bool, double> bv_admissible(int p, i64 q, int R, int n) {
  double omega = double(R) / double(n);
  if (!(omega < 10.0 / 19.0)) return {false, std::nan("")};
  double thr = double(p) * p * std::exp(2.0) * std::pow((10.0 - omega) / (10.0 - 19.0 * omega), 2.0);
  return {double(q) > thr, thr};
}

// One row per coprime residue a: exact integer sum of Lambda over the
// progression, rational main term q^n/phi(F), rational delta. The partition
// identity (rows summing to the coprime total) is enforced, not assumed.
inline std::vector<DiscrepancyRow> ap_lambda_discrepancy(const Modulus& F, int n,
                                                         const Budgets& budgets = Budgets::from_env()) {
  if (n < 1) fail(Errc::ConfigError, "n must be >= 1");
  (void)budgets;
  const GfPtr& f = F.field();
  detail::FactorScratch scratch(f);
  std::vector<i64> sums(F.states(), 0);
  i64 coprime_total = 0;
  RangeMonic range{f, n};
  u64 q = u64(f->q());
  std::vector<u32> buf(n + 1);
  for (u64 idx = 0; idx < range.size(); ++idx) {
    u64 v = idx;
    for (int i = 0; i < n; ++i) { buf[i] = u32(v % q); v /= q; }
    buf[n] = 1;
    int lam = scratch.lambda(buf, n);
    if (lam == 0) continue;
    Poly x = range.at(idx);
    u64 res = F.residue_index(x);
    if (!F.is_unit_residue(res)) continue;
    sums[res] += lam;
    coprime_total += lam;
  }
  Rational main(ipow(f->q(), n), F.phi());
  std::vector<DiscrepancyRow> rows;
  i64 check = 0;
  auto adm = ap_admissible(f->p(), f->q(), F.r(), n);
  for (u64 a : F.units()) {
    DiscrepancyRow row;
    row.field = f->spec_string();
    row.q = f->q();
    row.F = F.poly().str();
    row.r = F.r();
    row.n = n;
    row.a = F.residue_at(a).str();
    row.ap_sum = sums[a];
    row.main_term = main;
    row.delta = Rational(sums[a]) - main;
    row.inside_hypothesis = adm.first;
    row.threshold_q = adm.second;
    check += sums[a];
    rows.push_back(std::move(row));
  }
  if (check != coprime_total)
    fail(Errc::InvariantViolation, "progression sums do not partition the coprime total");
  return rows;
}

struct BvRow {
  std::string F;
  Rational max_abs_delta;
  std::string argmax_a;
};

struct BvReport {
  std::string field;
  i64 q = 0;
  int R = 0, n = 0;
  std::vector<BvRow> rows;  // monic F, 1 <= deg F < R, ascending (deg, index)
  Rational total;
  double observed_delta = 0;
  bool inside_hypothesis = false;
  double threshold_q = 0;
};

inline BvReport bombieri_vinogradov_sum(const GfPtr& f, int R, int n,
                                        const Budgets& budgets = Budgets::from_env(),
                                        int workers = 1) {
  if (R < 1 || n < 1) fail(Errc::ConfigError, "R and n must be >= 1");
  BvReport rep;
  rep.field = f->spec_string();
  rep.q = f->q();
  rep.R = R;
  rep.n = n;
  std::vector<Poly> moduli;
  for (int r = 1; r < R; ++r) {
    RangeMonic fr{f, r};
    for (u64 i = 0; i < fr.size(); ++i) moduli.push_back(fr.at(i));
  }
  auto rows = parallel_map<BvRow>(moduli.size(), workers, [&](u64 i) {
    Modulus F(moduli[i], budgets);
    auto disc = ap_lambda_discrepancy(F, n, budgets);
    BvRow row;
    row.F = F.poly().str();
    row.max_abs_delta = Rational(0);
    for (auto& d : disc) {
      Rational a = d.delta.abs();
      if (a > row.max_abs_delta) {
        row.max_abs_delta = a;
        row.argmax_a = d.a;
      }
    }
    return row;
  });
  rep.rows = std::move(rows);
  for (auto& row : rep.rows) rep.total += row.max_abs_delta;
  rep.observed_delta = rep.total.is_zero()
                           ? std::nan("")
                           : (n - log_q(rep.total.to_double(), rep.q)) / double(R);
  auto adm = bv_admissible(f->p(), f->q(), R, n);
  rep.inside_hypothesis = adm.first;
  rep.threshold_q = adm.second;
  return rep;
}

// ---------------------------------------------------------------------------
// main-term lemma: partial sums against -q^r/phi(F) with an exact tail bound

struct MainTermReport {
  std::string field;
  std::string F;
  int r = 0, d = 0;
  Rational lhs;     // sum_{k<=d} k q^-k M_k(F)
  Rational target;  // -q^r/phi(F)
  Rational error;   // lhs - target
  Rational tail;    // exact bound on |sum_{k>d}|
  std::vector<i64> inner_sums;  // M_k for k = 1..d
};

// Coefficients of prod over distinct P | F of (1 - u^{deg P})^{-1} up to
// degree d: the number of factor multisets of total degree j. The signed
// inner sums are then M_k = c_k - q c_{k-1}, and the full series telescopes
// to -q^r/phi(F), which makes |error| <= tail a theorem rather than a
// tolerance.
inline MainTermReport main_term_check(const Modulus& F, int d) {
  if (d < 1) fail(Errc::ConfigError, "d must be >= 1");
  if (F.r() < 1) fail(Errc::ConfigError, "main term needs deg F >= 1");
  const i64 q = F.gf().q();
  std::vector<int> degs;
  for (const auto& [p, e] : F.factorization().factors) degs.push_back(p.degree());

  std::vector<i64> c(d + 1, 0);
  c[0] = 1;
  for (int dp : degs)
    for (int j = dp; j <= d; ++j) c[j] += c[j - dp];

  MainTermReport rep;
  rep.field = F.gf().spec_string();
  rep.F = F.poly().str();
  rep.r = F.r();
  rep.d = d;
  Rational x(1, q);
  Rational xk = x;
  Rational lhs(0);
  for (int k = 1; k <= d; ++k) {
    i64 mk = c[k] - q * c[k - 1];
    rep.inner_sums.push_back(mk);
    lhs += Rational(k) * xk * Rational(mk);
    xk *= x;
  }
  rep.lhs = lhs;
  rep.target = -Rational(ipow(q, F.r()), F.phi());
  rep.error = rep.lhs - rep.target;

  // G(x) = prod (1 - x^dp)^-1 and G'(x), evaluated exactly at x = 1/q
  Rational G(1);
  Rational logdiff(0);  // G'/G = sum dp x^(dp-1) / (1 - x^dp)
  for (int dp : degs) {
    Rational xd(1);
    for (int i = 0; i < dp; ++i) xd *= x;
    Rational one_minus = Rational(1) - xd;
    G = G / one_minus;
    Rational xdm1(1);
    for (int i = 0; i + 1 < dp; ++i) xdm1 *= x;
    logdiff += Rational(dp) * xdm1 / one_minus;
  }
  Rational Gp = G * logdiff;
  Rational s1_full = x * Gp;               // sum k x^k c_k
  Rational s2_full = G + x * Gp;           // sum (j+1) x^j c_j
  Rational s1_part(0), s2_part(0);
  Rational xj(1);  // x^0
  for (int j = 0; j <= d; ++j) {
    if (j >= 1) s1_part += Rational(j) * xj * Rational(c[j]);
    if (j <= d - 1) s2_part += Rational(j + 1) * xj * Rational(c[j]);
    xj *= x;
  }
  rep.tail = (s1_full - s1_part) + (s2_full - s2_part);
  return rep;
}

// enumeration oracle for the inner sums, exact but exponential in k
inline i64 coprime_mertens_enumerated(const Modulus& F, int k) {
  RangeMonic range{F.field(), k};
  i64 acc = 0;
  for (u64 i = 0; i < range.size(); ++i) {
    Poly x = range.at(i);
    if (!F.coprime(x)) continue;
    acc += moebius(x);
  }
  return acc;
}

}  // namespace ffsum
