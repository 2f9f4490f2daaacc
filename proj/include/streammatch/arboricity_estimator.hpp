#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/heavy_shallow.hpp"
#include "streammatch/rational.hpp"
#include "streammatch/tutte_sketch.hpp"

// Composed matching-size estimator for graphs of arboricity <= alpha.
//
// One rank sketch with parameter k_gate = ceil(3T / (1 - eps)) watches the
// Tutte matrix; since a single sketch answers every threshold up to its
// parameter, it serves both the gate test and the power-of-two readout.
// If rank(T) < k_gate the matching is small and the doubling readout R
// already gives R/4 <= nu <= R/2. Otherwise the heavy/shallow estimators
// are in their accurate regime and the estimate is
// max(heavy, shallow) / ((1 + eps) * eta).
//
// T is n^{2/5} for one pass and n^{1/3} for two passes; C = ceil(2 alpha)+3;
// eta = 2.5 * ceil(2 alpha + 3) + 5.75.

namespace streammatch {

// Largest T >= 1 with T^den <= n^num.
inline long long integer_root_power(std::uint64_t n, int num, int den) {
  auto ok = [&](long long t) {
    if (t < 1) return false;
    unsigned __int128 lhs = 1, rhs = 1;
    for (int i = 0; i < den; ++i) {
      lhs *= static_cast<unsigned __int128>(t);
      if (lhs > (static_cast<unsigned __int128>(1) << 126)) return false;
    }
    for (int i = 0; i < num; ++i) rhs *= static_cast<unsigned __int128>(n);
    return lhs <= rhs;
  };
  long long t = std::max<long long>(
      1, static_cast<long long>(std::pow(static_cast<double>(n),
                                         static_cast<double>(num) / den)));
  while (ok(t + 1)) ++t;
  while (t > 1 && !ok(t)) --t;
  return t;
}

// Tight slack: max(h, s) / (1.25 C + 0.75) lower-bounds the matching size.
inline Rational sandwich_slack(long long C) { return Rational(5 * C + 3, 4); }

// Algorithm-form slack used by the composed estimator.
inline Rational composed_slack(long long ceil_two_alpha_plus_three) {
  return Rational(10 * ceil_two_alpha_plus_three + 23, 4);
}

struct ArboricityEstimate {
  enum class Branch { kRankDoubling, kHeavyShallow };
  Rational exact;
  double value = 0.0;
  Branch branch = Branch::kRankDoubling;
  long long rank_readout = 0;
  ThresholdedEstimate heavy;
  ThresholdedEstimate shallow;
};

struct ArboricityConfig {
  double alpha = 1.0;
  Rational eps = Rational(1, 2);
  int passes = 1;
  int shallow_reps = 1;  // one-pass shallow amplification (median)
  std::uint64_t seed = 0;
};

class ArboricityMatchingEstimator {
 public:
  ArboricityMatchingEstimator(std::uint32_t n, const ArboricityConfig& cfg)
      : n_(n), cfg_(cfg) {
    if (cfg.passes != 1 && cfg.passes != 2)
      throw std::invalid_argument("arboricity estimator: passes must be 1 or 2");
    double eps = cfg.eps.to_double();
    if (!(eps > 0.0) || Rational(3) * cfg.eps * cfg.eps >= Rational(1))
      throw std::invalid_argument("arboricity estimator: need 0 < eps < 1/sqrt(3)");

    T_ = cfg.passes == 1 ? integer_root_power(n, 2, 5) : integer_root_power(n, 1, 3);
    C_ = static_cast<long long>(std::ceil(2.0 * cfg.alpha)) + 3;
    eta_ = composed_slack(static_cast<long long>(std::ceil(2.0 * cfg.alpha + 3.0)));

    Rational gate = Rational(3 * T_) / (Rational(1) - cfg.eps);
    k_gate_ = static_cast<long long>(std::ceil(gate.to_double() - 1e-12));
    while (Rational(k_gate_) < gate) ++k_gate_;
    while (k_gate_ > 1 && Rational(k_gate_ - 1) >= gate) --k_gate_;

    // When the gate exceeds n the estimators cannot help anyway: the
    // doubling readout alone covers every possible matching size.
    degenerate_ = k_gate_ >= static_cast<long long>(n);
    long long k_cap = std::min<long long>(k_gate_, n);
    gate_sketch_ = std::make_unique<TutteRankSketch>(
        n, static_cast<std::uint32_t>(std::max<long long>(1, k_cap)), derive(cfg.seed, 71));
    if (!degenerate_) {
      heavy_ = std::make_unique<HeavyEstimator>(n, C_, T_, eps, derive(cfg.seed, 72));
      if (cfg.passes == 1) {
        shallow1_ = std::make_unique<ShallowOnePassMedian>(n, C_, T_, eps, cfg.alpha,
                                                           cfg.shallow_reps,
                                                           derive(cfg.seed, 73));
      } else {
        shallow2_ = std::make_unique<ShallowTwoPassEstimator>(n, C_, T_, eps, cfg.alpha,
                                                              derive(cfg.seed, 74));
      }
    }
  }

  void update(const EdgeUpdate& up) {
    if (pass_ == 0) gate_sketch_->update(up);
    if (heavy_ && pass_ == 0) heavy_->update(up);
    if (shallow1_ && pass_ == 0) shallow1_->update(up);
    if (shallow2_) shallow2_->update(up);
  }

  void end_of_pass() {
    if (shallow2_ && pass_ == 0) shallow2_->end_of_pass();
    ++pass_;
  }

  ArboricityEstimate finalize() const {
    ArboricityEstimate out;
    int rank = gate_sketch_->sketch_rank();
    bool gate_open = !degenerate_ &&
                     rank >= k_gate_;  // rank(M) = min(k+1, rank T) and k >= k_gate
    if (!gate_open) {
      long long readout = 0;
      if (rank >= 1) {
        long long p = 1;
        while (p * 2 <= rank) p *= 2;  // largest power of two <= rank
        readout = 2 * p;
      }
      out.branch = ArboricityEstimate::Branch::kRankDoubling;
      out.rank_readout = readout;
      out.exact = Rational(readout, 4);
      out.value = out.exact.to_double();
      return out;
    }
    out.branch = ArboricityEstimate::Branch::kHeavyShallow;
    out.rank_readout = rank;
    out.heavy = heavy_->finalize();
    out.shallow = cfg_.passes == 1 ? shallow1_->finalize() : shallow2_->finalize();
    Rational best = out.heavy.exact > out.shallow.exact ? out.heavy.exact : out.shallow.exact;
    out.exact = best / ((Rational(1) + cfg_.eps) * eta_);
    out.value = out.exact.to_double();
    return out;
  }

  long long threshold() const { return T_; }
  long long light_degree_cap() const { return C_; }
  long long gate_parameter() const { return k_gate_; }
  Rational slack() const { return eta_; }
  bool degenerate() const { return degenerate_; }

  long long gate_words() const { return gate_sketch_->size_words(); }
  long long heavy_words() const { return heavy_ ? heavy_->size_words() : 0; }
  long long shallow_words() const {
    if (shallow1_) return shallow1_->size_words();
    if (shallow2_) return shallow2_->size_words();
    return 0;
  }
  long long size_words() const { return gate_words() + heavy_words() + shallow_words() + 1; }

 private:
  std::uint32_t n_;
  ArboricityConfig cfg_;
  long long T_ = 1, C_ = 4, k_gate_ = 1;
  Rational eta_;
  bool degenerate_ = false;
  int pass_ = 0;
  std::unique_ptr<TutteRankSketch> gate_sketch_;
  std::unique_ptr<HeavyEstimator> heavy_;
  std::unique_ptr<ShallowOnePassMedian> shallow1_;
  std::unique_ptr<ShallowTwoPassEstimator> shallow2_;
};

}  // namespace streammatch
