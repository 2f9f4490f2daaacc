#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/l0_sampler.hpp"
#include "streammatch/rational.hpp"
#include "streammatch/rng.hpp"
#include "streammatch/sparse_recovery.hpp"

// Thresholded estimators for the heavy-node count h (vertices of degree > C)
// and the shallow-edge count s (edges whose endpoints both have degree <= C).
// Each obeys a two-regime contract with threshold T: if the true count is at
// least T the estimate is within (1 +- eps) of it, and if the true count is
// below T the estimate stays below 3T. The regime field reports which side
// of the 3T fence the estimate landed on; an estimate >= 3T certifies (whp)
// that the truth is at least T.

namespace streammatch {

enum class EstimateRegime { kAccurate, kBelowThreshold };

struct ThresholdedEstimate {
  double value = 0.0;
  Rational exact;
  EstimateRegime regime = EstimateRegime::kBelowThreshold;
};

struct SamplerFailure : std::runtime_error {
  explicit SamplerFailure(const std::string& what) : std::runtime_error(what) {}
};
struct RecoveryFailure : std::runtime_error {
  explicit RecoveryFailure(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Exact-size uniform vertex sample with aligned degree counters. Ids are
// kept sorted; an id and its 32-bit degree pack into one machine word.
class SampledDegrees {
 public:
  SampledDegrees() = default;
  SampledDegrees(std::uint32_t n, std::uint64_t sample_size, std::uint64_t seed) {
    sample_size = std::min<std::uint64_t>(sample_size, n);
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    auto eng = make_engine(seed);
    for (std::uint64_t i = 0; i < sample_size; ++i) {
      std::uint64_t j = i + eng() % (n - i);
      std::swap(pool[i], pool[j]);
    }
    ids_.assign(pool.begin(), pool.begin() + sample_size);
    std::sort(ids_.begin(), ids_.end());
    deg_.assign(ids_.size(), 0);
  }

  explicit SampledDegrees(std::vector<std::uint32_t> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    deg_.assign(ids_.size(), 0);
  }

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::uint32_t>& ids() const { return ids_; }

  int index_of(std::uint32_t v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v) return -1;
    return static_cast<int>(it - ids_.begin());
  }

  void bump(std::uint32_t v, int delta) {
    int i = index_of(v);
    if (i >= 0) deg_[i] += delta;
  }

  std::int32_t degree_at(int index) const { return deg_[index]; }

  long long count_heavy(long long C) const {
    long long h = 0;
    for (auto d : deg_)
      if (d > C) ++h;
    return h;
  }

  long long size_words() const { return static_cast<long long>(ids_.size()); }

 private:
  std::vector<std::uint32_t> ids_;
  std::vector<std::int32_t> deg_;
};

}  // namespace detail

// Heavy-node estimator: samples ceil((3 ln n / eps^2) * (n / T)) vertices up
// front (capped at n), tracks their degrees through the stream, and rescales
// the heavy count by n / |S|.
class HeavyEstimator {
 public:
  HeavyEstimator(std::uint32_t n, long long C, long long T, double eps, std::uint64_t seed)
      : n_(n), C_(C), T_(T) {
    double want = std::ceil(3.0 * std::log(std::max<double>(n, 2.0)) / (eps * eps) *
                            (static_cast<double>(n) / static_cast<double>(T)));
    sample_ = detail::SampledDegrees(n, static_cast<std::uint64_t>(want), derive(seed, 61));
  }

  void update(const EdgeUpdate& up) {
    sample_.bump(up.edge.u, up.sign);
    sample_.bump(up.edge.v, up.sign);
  }

  ThresholdedEstimate finalize() const {
    ThresholdedEstimate out;
    long long heavy = sample_.count_heavy(C_);
    out.exact = Rational(static_cast<long long>(n_), static_cast<long long>(sample_.size())) *
                Rational(heavy);
    out.value = out.exact.to_double();
    out.regime = out.exact >= Rational(3 * T_) ? EstimateRegime::kAccurate
                                               : EstimateRegime::kBelowThreshold;
    return out;
  }

  std::size_t sample_size() const { return sample_.size(); }
  long long size_words() const { return sample_.size_words(); }

 private:
  std::uint32_t n_;
  long long C_, T_;
  detail::SampledDegrees sample_;
};

// Two-pass shallow-edge estimator. Pass 1 draws ceil((3 ln n / eps^2) *
// (alpha n / T)) uniform edges through independent l0 samplers over the
// edge-indicator vector and counts edges exactly. Pass 2 tracks the degrees
// of the sampled endpoints; the estimate rescales the shallow sample count
// by m / |samples|.
class ShallowTwoPassEstimator {
 public:
  ShallowTwoPassEstimator(std::uint32_t n, long long C, long long T, double eps,
                          double alpha, std::uint64_t seed, double sampler_delta = 0.05)
      : n_(n), C_(C), T_(T) {
    double want = std::ceil(3.0 * std::log(std::max<double>(n, 2.0)) / (eps * eps) *
                            (alpha * static_cast<double>(n) / static_cast<double>(T)));
    std::size_t count = static_cast<std::size_t>(std::max(1.0, want));
    std::uint64_t dim = static_cast<std::uint64_t>(n) * n;
    samplers_.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      samplers_.emplace_back(dim, sampler_delta, derive(seed, 62, i));
  }

  void update(const EdgeUpdate& up) {
    if (pass_ == 0) {
      std::uint64_t coord = static_cast<std::uint64_t>(up.edge.u) * n_ + up.edge.v;
      for (auto& sk : samplers_) sk.update(coord, up.sign);
      edge_count_ += up.sign;
    } else {
      degrees_.bump(up.edge.u, up.sign);
      degrees_.bump(up.edge.v, up.sign);
    }
  }

  // Queries the samplers and emits the pass-2 subscription (the endpoints
  // whose degrees the second pass must track).
  const std::vector<std::uint32_t>& end_of_pass() {
    if (pass_ != 0) return subscription_;
    pass_ = 1;
    std::size_t failed = 0;
    for (const auto& sk : samplers_) {
      auto r = sk.sample();
      if (r.status == L0SampleStatus::kFail) {
        ++failed;
        continue;
      }
      if (r.status == L0SampleStatus::kEmpty) continue;
      std::uint32_t u = static_cast<std::uint32_t>(r.sample.coord / n_);
      std::uint32_t v = static_cast<std::uint32_t>(r.sample.coord % n_);
      sampled_edges_.emplace_back(u, v);
      subscription_.push_back(u);
      subscription_.push_back(v);
    }
    if (2 * failed > samplers_.size())
      throw SamplerFailure("shallow 2-pass: most edge samplers failed");
    std::sort(subscription_.begin(), subscription_.end());
    subscription_.erase(std::unique(subscription_.begin(), subscription_.end()),
                        subscription_.end());
    degrees_ = detail::SampledDegrees(subscription_);
    return subscription_;
  }

  ThresholdedEstimate finalize() const {
    ThresholdedEstimate out;
    if (sampled_edges_.empty()) return out;
    long long shallow = 0;
    for (const auto& [u, v] : sampled_edges_) {
      int iu = degrees_.index_of(u), iv = degrees_.index_of(v);
      if (degrees_.degree_at(iu) <= C_ && degrees_.degree_at(iv) <= C_) ++shallow;
    }
    out.exact = Rational(edge_count_, static_cast<long long>(sampled_edges_.size())) *
                Rational(shallow);
    out.value = out.exact.to_double();
    out.regime = out.exact >= Rational(3 * T_) ? EstimateRegime::kAccurate
                                               : EstimateRegime::kBelowThreshold;
    return out;
  }

  std::size_t sampler_count() const { return samplers_.size(); }
  long long exact_edge_count() const { return edge_count_; }

  long long size_words() const {
    long long w = 1;  // edge counter
    for (const auto& sk : samplers_) w += sk.size_words();
    return w + degrees_.size_words();
  }

 private:
  std::uint32_t n_;
  long long C_, T_;
  int pass_ = 0;
  long long edge_count_ = 0;
  std::vector<L0Sampler> samplers_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sampled_edges_;
  std::vector<std::uint32_t> subscription_;
  detail::SampledDegrees degrees_;
};

// One-pass shallow-edge estimator. Samples ceil(4n / (eps sqrt(T))) vertices
// (capped at n), keeps their exact degrees plus the induced subgraph in an
// (alpha |S|)-sparse recovery sketch, and at the end counts recovered
// induced edges with two light endpoints, rescaled by the pair-sampling
// probability p = |S|(|S|-1) / (n(n-1)).
//
// Succeeds with constant probability only (>= 3/4 accurate regime, >= 15/16
// below threshold, and the variance bound behind those constants assumes
// T > (16 C / eps)^2). ShallowOnePassMedian amplifies by running
// independent copies and taking the median.
class ShallowOnePassEstimator {
 public:
  ShallowOnePassEstimator(std::uint32_t n, long long C, long long T, double eps,
                          double alpha, std::uint64_t seed)
      : n_(n), C_(C), T_(T) {
    double want = std::ceil(4.0 * static_cast<double>(n) /
                            (eps * std::sqrt(static_cast<double>(T))));
    sample_ = detail::SampledDegrees(n, static_cast<std::uint64_t>(std::max(2.0, want)),
                                     derive(seed, 63));
    std::uint64_t budget =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(alpha * static_cast<double>(sample_.size()))));
    sketch_ = SparseRecovery(static_cast<std::uint64_t>(n) * n, budget, 0.02, derive(seed, 64));
  }

  void update(const EdgeUpdate& up) {
    int iu = sample_.index_of(up.edge.u);
    int iv = sample_.index_of(up.edge.v);
    if (iu >= 0) sample_.bump(up.edge.u, up.sign);
    if (iv >= 0) sample_.bump(up.edge.v, up.sign);
    if (iu >= 0 && iv >= 0) {
      std::uint64_t coord = static_cast<std::uint64_t>(up.edge.u) * n_ + up.edge.v;
      sketch_.update(coord, up.sign);
    }
  }

  ThresholdedEstimate finalize() const {
    auto recovered = sketch_.recover();
    if (!recovered)
      throw RecoveryFailure("shallow 1-pass: induced subgraph exceeded the recovery budget");
    long long shallow = 0;
    for (const auto& [coord, mult] : *recovered) {
      if (mult == 0) continue;
      std::uint32_t u = static_cast<std::uint32_t>(coord / n_);
      std::uint32_t v = static_cast<std::uint32_t>(coord % n_);
      int iu = sample_.index_of(u), iv = sample_.index_of(v);
      if (sample_.degree_at(iu) <= C_ && sample_.degree_at(iv) <= C_) ++shallow;
    }
    ThresholdedEstimate out;
    long long s = static_cast<long long>(sample_.size());
    // X / p with p = |S|(|S|-1) / (n(n-1))
    out.exact = Rational(shallow) * Rational(static_cast<long long>(n_)) *
                Rational(static_cast<long long>(n_) - 1) / (Rational(s) * Rational(s - 1));
    out.value = out.exact.to_double();
    out.regime = out.exact >= Rational(3 * T_) ? EstimateRegime::kAccurate
                                               : EstimateRegime::kBelowThreshold;
    return out;
  }

  std::size_t sample_size() const { return sample_.size(); }
  long long size_words() const { return sample_.size_words() + sketch_.size_words(); }

 private:
  std::uint32_t n_;
  long long C_, T_;
  detail::SampledDegrees sample_;
  SparseRecovery sketch_ = SparseRecovery(1, 1, 0.5, 0);
};

// Median over independent one-pass shallow copies. Copies that lose their
// recovery sketch are dropped; the whole estimate fails only when every copy
// does.
class ShallowOnePassMedian {
 public:
  ShallowOnePassMedian(std::uint32_t n, long long C, long long T, double eps, double alpha,
                       int reps, std::uint64_t seed) {
    reps = std::max(1, reps);
    copies_.reserve(reps);
    for (int r = 0; r < reps; ++r) copies_.emplace_back(n, C, T, eps, alpha, derive(seed, 65, r));
  }

  void update(const EdgeUpdate& up) {
    for (auto& c : copies_) c.update(up);
  }

  ThresholdedEstimate finalize() const {
    std::vector<ThresholdedEstimate> results;
    for (const auto& c : copies_) {
      try {
        results.push_back(c.finalize());
      } catch (const RecoveryFailure&) {
      }
    }
    if (results.empty())
      throw RecoveryFailure("shallow 1-pass: every repetition exceeded its recovery budget");
    std::sort(results.begin(), results.end(),
              [](const ThresholdedEstimate& a, const ThresholdedEstimate& b) {
                return a.exact < b.exact;
              });
    return results[results.size() / 2];
  }

  long long size_words() const {
    long long w = 0;
    for (const auto& c : copies_) w += c.size_words();
    return w;
  }

 private:
  std::vector<ShallowOnePassEstimator> copies_;
};

}  // namespace streammatch
