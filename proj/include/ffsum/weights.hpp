#pragma once

#include <complex>
#include <random>
#include <vector>

#include "ffsum/poly.hpp"
#include "ffsum/rational.hpp"

namespace ffsum {

// Complex weight sequence on the range deg x < bound, stored densely by poly
// index. Exact (Gaussian-rational) storage whenever the source allows it;
// arbitrary complex weights fall back to doubles and the evaluators then
// return floating values.
class WeightSeq {
 public:
  static WeightSeq units(GfPtr f, int n, const Budgets& budgets = Budgets::from_env()) {
    WeightSeq w(std::move(f), n, true, budgets);
    w.wx_.assign(w.size_, GaussianRational::integer(1));
    w.max_abs_ = 1.0;
    return w;
  }

  // +-1 weights drawn from mt19937_64(seed), one bit per index in ascending
  // poly-index order; the generator and seed are recorded in run manifests.
  static WeightSeq random_pm1(GfPtr f, int n, u64 seed, const Budgets& budgets = Budgets::from_env()) {
    WeightSeq w(std::move(f), n, true, budgets);
    std::mt19937_64 rng(seed);
    w.wx_.resize(w.size_);
    for (u64 i = 0; i < w.size_; ++i)
      w.wx_[i] = GaussianRational::integer((rng() & 1) ? 1 : -1);
    w.max_abs_ = 1.0;
    return w;
  }

  static WeightSeq exact(GfPtr f, int n, std::vector<std::pair<u64, GaussianRational>> entries,
                         const Budgets& budgets = Budgets::from_env()) {
    WeightSeq w(std::move(f), n, true, budgets);
    w.wx_.assign(w.size_, GaussianRational());
    w.max_abs_ = 0.0;
    for (auto& [idx, g] : entries) {
      if (idx >= w.size_) fail(Errc::ConfigError, "weight index out of range");
      w.wx_[idx] = g;
      w.max_abs_ = std::max(w.max_abs_, g.abs());
    }
    return w;
  }

  static WeightSeq floating(GfPtr f, int n, std::vector<std::complex<double>> values,
                            const Budgets& budgets = Budgets::from_env()) {
    WeightSeq w(std::move(f), n, false, budgets);
    if (values.size() != w.size_) fail(Errc::ConfigError, "weight vector has wrong length");
    w.wf_ = std::move(values);
    w.max_abs_ = 0.0;
    for (auto& v : w.wf_) w.max_abs_ = std::max(w.max_abs_, std::abs(v));
    return w;
  }

  const GfPtr& field() const { return f_; }
  int bound() const { return n_; }
  u64 size() const { return size_; }
  bool is_exact() const { return exact_; }
  double max_abs() const { return max_abs_; }

  const GaussianRational& g(u64 idx) const { return wx_[idx]; }
  std::complex<double> c(u64 idx) const {
    if (exact_) return {wx_[idx].re.to_double(), wx_[idx].im.to_double()};
    return wf_[idx];
  }

 private:
  WeightSeq(GfPtr f, int n, bool exact, const Budgets& budgets)
      : f_(std::move(f)), n_(n), exact_(exact) {
    if (n < 0) fail(Errc::ConfigError, "negative weight range");
    i64 states = ipow(f_->q(), n);
    if (states > budgets.max_states) fail(Errc::ResourceLimit, "weight range beyond budget");
    size_ = u64(states);
  }

  GfPtr f_;
  int n_ = 0;
  bool exact_ = true;
  u64 size_ = 0;
  double max_abs_ = 0.0;
  std::vector<GaussianRational> wx_;
  std::vector<std::complex<double>> wf_;
};

}  // namespace ffsum
