#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/heavy_shallow.hpp"
#include "streammatch/l0_sampler.hpp"
#include "streammatch/rng.hpp"
#include "streammatch/sparse_recovery.hpp"

// Two-pass maintenance of a matching of size up to n^a1 in a dynamic stream
// with at most m edges, using ~ (m / n^a2) n^a1 edge samples plus an
// n^a2-sparse recovery sketch.
//
// Pass 1 samples edges via independent l0 samplers and greedily keeps
// free-free edges. If the target size is not reached, the edges between
// still-free vertices are few (whp), so pass 2 captures them in the recovery
// sketch and a greedy completion runs offline.

namespace streammatch {

class SmallMatchingMaintainer {
 public:
  SmallMatchingMaintainer(std::uint32_t n, long long edge_bound, double a1, double a2,
                          std::uint64_t seed)
      : n_(n) {
    target_ = static_cast<long long>(std::ceil(std::pow(static_cast<double>(n), a1) - 1e-9));
    target_ = std::max<long long>(1, target_);
    recovery_budget_ = static_cast<std::uint64_t>(
        std::max(1.0, std::ceil(std::pow(static_cast<double>(n), a2) - 1e-9)));
    double want = 2.0 * (static_cast<double>(edge_bound) /
                         std::pow(static_cast<double>(n), a2)) *
                  std::pow(static_cast<double>(n), a1);
    std::size_t count = static_cast<std::size_t>(std::max(1.0, std::ceil(want)));
    std::uint64_t dim = static_cast<std::uint64_t>(n) * n;
    samplers_.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      samplers_.emplace_back(dim, 0.05, derive(seed, 81, i));
    matched_.assign(n, false);
    recovery_seed_ = derive(seed, 82);
  }

  void update(const EdgeUpdate& up) {
    if (pass_ == 0) {
      std::uint64_t coord = static_cast<std::uint64_t>(up.edge.u) * n_ + up.edge.v;
      for (auto& sk : samplers_) sk.update(coord, up.sign);
    } else if (sketch_) {
      if (!matched_[up.edge.u] && !matched_[up.edge.v]) {
        std::uint64_t coord = static_cast<std::uint64_t>(up.edge.u) * n_ + up.edge.v;
        sketch_->update(coord, up.sign);
      }
    }
  }

  // Draws the pass-1 samples in sampler order and freezes the greedy
  // matching; pass 2 then collects edges between still-free vertices.
  void end_of_pass() {
    if (pass_ != 0) return;
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
      if (static_cast<long long>(matching_.size()) >= target_) continue;
      if (!matched_[u] && !matched_[v]) {
        matched_[u] = matched_[v] = true;
        matching_.emplace_back(u, v, 1);
      }
    }
    if (2 * failed > samplers_.size())
      throw SamplerFailure("small-matching: most edge samplers failed in pass 1");
    if (static_cast<long long>(matching_.size()) < target_) {
      sketch_ = std::make_unique<SparseRecovery>(static_cast<std::uint64_t>(n_) * n_,
                                                 recovery_budget_, 0.02, recovery_seed_);
    }
  }

  std::vector<WeightedEdge> finalize() {
    if (static_cast<long long>(matching_.size()) >= target_ || !sketch_) return matching_;
    auto recovered = sketch_->recover();
    if (!recovered)
      throw RecoveryFailure("small-matching: residual edges exceeded the recovery budget");
    for (const auto& [coord, mult] : *recovered) {
      if (mult == 0) continue;
      if (static_cast<long long>(matching_.size()) >= target_) break;
      std::uint32_t u = static_cast<std::uint32_t>(coord / n_);
      std::uint32_t v = static_cast<std::uint32_t>(coord % n_);
      if (!matched_[u] && !matched_[v]) {
        matched_[u] = matched_[v] = true;
        matching_.emplace_back(u, v, 1);
      }
    }
    return matching_;
  }

  long long target() const { return target_; }

  long long size_words() const {
    long long w = static_cast<long long>(matching_.size()) + 1;
    for (const auto& sk : samplers_) w += sk.size_words();
    if (sketch_) w += sketch_->size_words();
    return w;
  }

 private:
  std::uint32_t n_;
  long long target_ = 1;
  std::uint64_t recovery_budget_ = 1;
  std::uint64_t recovery_seed_ = 0;
  int pass_ = 0;
  std::vector<L0Sampler> samplers_;
  std::unique_ptr<SparseRecovery> sketch_;
  std::vector<bool> matched_;
  std::vector<WeightedEdge> matching_;
};

}  // namespace streammatch
