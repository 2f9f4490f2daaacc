#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "streammatch/core.hpp"
#include "streammatch/rank_partition.hpp"
#include "streammatch/rational.hpp"
#include "streammatch/rng.hpp"

// Weighted matching estimation on top of any unweighted estimator.
//
// One estimator instance runs per weight rank; the instance for rank i
// consumes every update of rank >= i, so it estimates the matching size of
// the suffix graph. After the stream, ranks are scanned from the top: a rank
// survives (is "good") if its estimate beats the last accepted rank's by the
// factor T, and it contributes (is "significant") if the increment also
// beats the last contribution by the factor c. The reported weight is
// (2/5) * sum over ranks of 2^i times the contribution, and with a
// lambda-accurate black box it lands within [w(M*)/O(lambda^4), w(M*)].
//
// Thresholds: T = 8 lambda^2 - 2 lambda and c = (2/5) T + 5 lambda; the
// latter equalizes the two loss regimes, 5 lambda c = 2 lambda T / (1 - 5
// lambda / c) = 2 lambda T + 25 lambda^2. All survival tests run in exact
// rational arithmetic so tie-breaking never depends on rounding.

namespace streammatch {

struct CombinatorParams {
  Rational good_ratio;          // T
  Rational significance_ratio;  // c

  static CombinatorParams for_lambda(const Rational& lambda) {
    CombinatorParams p;
    p.good_ratio = Rational(8) * lambda * lambda - Rational(2) * lambda;
    p.significance_ratio = Rational(2, 5) * p.good_ratio + Rational(5) * lambda;
    return p;
  }
};

// One streaming instance of the unweighted black box.
class UnweightedMatchingEstimator {
 public:
  virtual ~UnweightedMatchingEstimator() = default;
  virtual void update(const EdgeUpdate& up) = 0;
  virtual void end_of_pass() {}
  virtual Rational estimate() = 0;
  virtual long long size_words() const { return 0; }
};

// Factory plus contract metadata for a black-box estimator family.
struct UnweightedEstimatorHandle {
  std::string name;
  Rational lambda = Rational(1);
  double delta = 0.0;
  int passes = 1;
  std::function<std::unique_ptr<UnweightedMatchingEstimator>(std::uint32_t n,
                                                             std::uint64_t seed)>
      make;
};

struct RankReport {
  Rational lambda;
  CombinatorParams params;
  int top_rank = -1;                     // re-based to the largest nonempty rank
  std::vector<Rational> raw_estimates;   // black-box outputs per rank 0..t
  std::vector<Rational> kept_estimates;  // S_hat (zeroed where not good)
  std::vector<Rational> contributions;   // R_hat
  std::vector<int> good_ranks;           // descending
  std::vector<int> significant_ranks;    // descending
  std::vector<int> last_trace;           // value of `last` at each scan step i = t-1..0
  Rational estimate;
  double failure_budget = 0.0;
  std::uint64_t seed = 0;
  long long words = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["lambda"] = lambda.to_double();
    j["T"] = params.good_ratio.to_double();
    j["c"] = params.significance_ratio.to_double();
    j["t"] = top_rank;
    auto vec = [](const std::vector<Rational>& v) {
      std::vector<double> d;
      d.reserve(v.size());
      for (const auto& r : v) d.push_back(r.to_double());
      return d;
    };
    j["S_hat"] = vec(kept_estimates);
    j["R_hat"] = vec(contributions);
    j["I_good"] = good_ranks;
    j["I_sign"] = significant_ranks;
    j["estimate"] = estimate.to_double();
    j["failure_budget"] = failure_budget;
    j["S_raw"] = vec(raw_estimates);
    j["last_trace"] = last_trace;
    return j;
  }
};

class WeightedMatchingCombinator {
 public:
  WeightedMatchingCombinator(std::uint32_t n, UnweightedEstimatorHandle handle,
                             std::uint64_t seed)
      : n_(n), handle_(std::move(handle)), seed_(seed) {}

  // Rank j updates feed the instances for ranks 0..j. Instances appear when
  // the first edge at or above their rank does, which is sound because an
  // instance created at the first rank-j edge has missed only strictly
  // lighter updates.
  void update(const EdgeUpdate& up) {
    int r = rank_of(up.edge.w);
    ensure_rank(r);
    if (pass_ == 0) net_edges_[r] += up.sign;  // later passes replay the stream
    for (int i = 0; i <= r; ++i) instances_[i]->update(up);
  }

  void end_of_pass() {
    ++pass_;
    for (auto& inst : instances_) inst->end_of_pass();
  }

  RankReport finalize() {
    RankReport rep;
    rep.lambda = handle_.lambda;
    rep.params = CombinatorParams::for_lambda(handle_.lambda);
    rep.seed = seed_;

    int top = -1;
    for (int i = static_cast<int>(net_edges_.size()) - 1; i >= 0; --i) {
      if (net_edges_[i] > 0) {
        top = i;
        break;
      }
    }
    rep.top_rank = top;
    for (const auto& inst : instances_) rep.words += inst->size_words();
    if (top < 0) {
      rep.failure_budget = 0.0;
      return rep;
    }

    const Rational& T = rep.params.good_ratio;
    const Rational& c = rep.params.significance_ratio;
    int t = top;
    rep.raw_estimates.assign(t + 1, Rational());
    rep.kept_estimates.assign(t + 1, Rational());
    rep.contributions.assign(t + 1, Rational());
    for (int i = 0; i <= t; ++i) rep.raw_estimates[i] = instances_[i]->estimate();

    rep.kept_estimates[t] = rep.raw_estimates[t];
    rep.contributions[t] = rep.raw_estimates[t];
    int last = t;
    for (int i = t - 1; i >= 0; --i) {
      rep.last_trace.push_back(last);
      const Rational& s_i = rep.raw_estimates[i];
      if (s_i > rep.kept_estimates[last] * T) {
        rep.kept_estimates[i] = s_i;
        if (s_i - rep.kept_estimates[last] >= c * rep.contributions[last]) {
          rep.contributions[i] = s_i - rep.kept_estimates[last];
          last = i;
        }
      }
    }
    for (int i = t; i >= 0; --i) {
      if (!rep.kept_estimates[i].is_zero()) rep.good_ranks.push_back(i);
      if (!rep.contributions[i].is_zero()) rep.significant_ranks.push_back(i);
    }
    for (int i = 0; i <= t; ++i)
      rep.estimate += Rational(representative(i)) * rep.contributions[i];
    rep.estimate *= Rational(2, 5);
    rep.failure_budget = handle_.delta * static_cast<double>(t + 1);
    return rep;
  }

 private:
  void ensure_rank(int r) {
    while (static_cast<int>(instances_.size()) <= r) {
      int i = static_cast<int>(instances_.size());
      instances_.push_back(handle_.make(n_, derive(seed_, 91, i)));
      net_edges_.push_back(0);
    }
  }

  std::uint32_t n_;
  UnweightedEstimatorHandle handle_;
  std::uint64_t seed_;
  int pass_ = 0;
  std::vector<std::unique_ptr<UnweightedMatchingEstimator>> instances_;
  std::vector<long long> net_edges_;
};

inline RankReport run_combinator(const StreamSource& stream,
                                 const UnweightedEstimatorHandle& handle,
                                 std::uint64_t seed) {
  WeightedMatchingCombinator comb(stream.n, handle, seed);
  int passes_needed = handle.passes;
  for (int p = 0; p < passes_needed; ++p) {
    const auto& ups = stream.passes[std::min<std::size_t>(p, stream.passes.size() - 1)];
    for (const auto& up : ups) comb.update(up);
    if (p + 1 < passes_needed) comb.end_of_pass();
  }
  return comb.finalize();
}

}  // namespace streammatch
