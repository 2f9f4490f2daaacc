#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/field.hpp"
#include "streammatch/rng.hpp"
#include "streammatch/serialize.hpp"

// Rank-decision sketch for the Tutte matrix. T(G) is the n x n
// skew-symmetric matrix with +-x_uv on edges, x_uv pseudorandom in the seed
// and the canonical pair id; rank(T) = 2 * (max matching size) up to a
// Schwartz-Zippel failure of about n^2 / p.
//
// The sketch holds M = L * T(G) * R for seed-derived L ((k+1) x n) and
// R (n x (k+1)), maintained edge by edge in O(k^2) field operations. With
// probability 1 - O((n^2 + k^2)/p), rank(M) = min(k+1, rank(T)), so one
// sketch answers "rank(T) >= j" for every j <= k+1.

namespace streammatch {

class TutteRankSketch {
 public:
  TutteRankSketch(std::uint32_t n, std::uint32_t k, std::uint64_t seed)
      : n_(n), k_(k), seed_(seed), m_(static_cast<std::size_t>(k + 1) * (k + 1)) {
    x_seed_ = derive(seed_, 41);
    l_seed_ = derive(seed_, 42);
    r_seed_ = derive(seed_, 43);
  }

  std::uint32_t rank_parameter() const { return k_; }

  void update(VertexId u, VertexId v, int sign) {
    if (u > v) std::swap(u, v);  // T carries +x at the canonical orientation
    Fp61 x = indeterminate(u, v);
    if (sign < 0) x = -x;
    const std::uint32_t d = k_ + 1;
    scratch_.resize(4 * d);
    Fp61* lu = scratch_.data();
    Fp61* lv = lu + d;
    Fp61* ru = lv + d;
    Fp61* rv = ru + d;
    for (std::uint32_t i = 0; i < d; ++i) {
      lu[i] = x * left_entry(i, u);
      lv[i] = x * left_entry(i, v);
      ru[i] = right_entry(u, i);
      rv[i] = right_entry(v, i);
    }
    for (std::uint32_t r = 0; r < d; ++r) {
      Fp61* row = &m_[static_cast<std::size_t>(r) * d];
      for (std::uint32_t c = 0; c < d; ++c) row[c] += lu[r] * rv[c] - lv[r] * ru[c];
    }
  }

  void update(const EdgeUpdate& up) { update(up.edge.u, up.edge.v, up.sign); }

  int sketch_rank() const {
    const std::uint32_t d = k_ + 1;
    std::vector<std::vector<Fp61>> m(d, std::vector<Fp61>(d));
    for (std::uint32_t r = 0; r < d; ++r)
      for (std::uint32_t c = 0; c < d; ++c) m[r][c] = m_[static_cast<std::size_t>(r) * d + c];
    return fp_rank(m);
  }

  // Decides rank(T(G)) >= j; valid for j <= k+1.
  bool rank_at_least(std::uint32_t j) const { return static_cast<std::uint32_t>(sketch_rank()) >= j; }

  bool decide() const { return rank_at_least(k_); }

  bool is_zero_state() const {
    for (const Fp61& f : m_)
      if (!f.is_zero()) return false;
    return true;
  }

  long long size_words() const { return static_cast<long long>(m_.size()) + 8; }

  // Seed-derived matrix entries, exposed so tests can build L*T*R densely.
  Fp61 indeterminate(VertexId u, VertexId v) const {
    return prf_field(x_seed_, edge_pair_id(u, v));
  }
  Fp61 left_entry(std::uint32_t row, VertexId u) const {
    return prf_field(l_seed_, static_cast<std::uint64_t>(u) * (k_ + 1) + row);
  }
  Fp61 right_entry(VertexId v, std::uint32_t col) const {
    return prf_field(r_seed_, static_cast<std::uint64_t>(v) * (k_ + 1) + col);
  }

  std::vector<std::uint8_t> serialize() const {
    BlobWriter w(SketchKind::kTutteRank, {n_, k_, seed_});
    for (const Fp61& f : m_) w.put64(f.value());
    return w.take();
  }

  static TutteRankSketch deserialize(const std::vector<std::uint8_t>& bytes) {
    BlobReader r(bytes, SketchKind::kTutteRank);
    const auto& p = r.params();
    TutteRankSketch sk(static_cast<std::uint32_t>(p[0]), static_cast<std::uint32_t>(p[1]), p[2]);
    for (Fp61& f : sk.m_) f = Fp61::raw(r.get64());
    return sk;
  }

 private:
  std::uint32_t n_, k_;
  std::uint64_t seed_;
  std::uint64_t x_seed_ = 0, l_seed_ = 0, r_seed_ = 0;
  std::vector<Fp61> m_;
  mutable std::vector<Fp61> scratch_;
};

// Dense Tutte matrix with the same indeterminates a sketch under `seed`
// would use (the sketch's k does not influence them).
inline std::vector<std::vector<Fp61>> dense_tutte_matrix(const GraphSnapshot& g,
                                                         std::uint64_t seed) {
  std::uint64_t xseed = derive(seed, 41);
  std::vector<std::vector<Fp61>> t(g.n, std::vector<Fp61>(g.n));
  for (const auto& e : g.edges) {
    Fp61 x = prf_field(xseed, edge_pair_id(e));
    t[e.u][e.v] = x;
    t[e.v][e.u] = -x;
  }
  return t;
}

inline int dense_tutte_rank(const GraphSnapshot& g, std::uint64_t seed) {
  auto t = dense_tutte_matrix(g, seed);
  return fp_rank(t);
}

// Runs rank-decision sketches for k = 1, 2, 4, ..., k_max in parallel over a
// stream and returns the doubling readout: the largest 2^(i+1) such that
// rank(T) >= 2^i held, or 0 when even rank >= 1 fails. When the decisions
// are correct and 2 * (matching size) < k_max, the returned R satisfies
// R/4 <= matching size <= R/2.
class DoublingRankEstimator {
 public:
  DoublingRankEstimator(std::uint32_t n, std::uint32_t k_max, std::uint64_t seed) {
    if (k_max == 0 || (k_max & (k_max - 1)) != 0)
      throw std::invalid_argument("doubling estimator: k_max must be a power of two");
    for (std::uint32_t k = 1;; k *= 2) {
      sketches_.emplace_back(n, k, derive(seed, 51, k));
      if (k >= k_max) break;
    }
  }

  void update(const EdgeUpdate& up) {
    for (auto& sk : sketches_) sk.update(up);
  }

  long long readout() const {
    long long best = 0;
    for (const auto& sk : sketches_) {
      if (sk.decide()) best = 2LL * sk.rank_parameter();
    }
    return best;
  }

  long long size_words() const {
    long long w = 0;
    for (const auto& sk : sketches_) w += sk.size_words();
    return w;
  }

 private:
  std::vector<TutteRankSketch> sketches_;
};

inline long long matching_size_by_doubling(const std::vector<EdgeUpdate>& updates,
                                           std::uint32_t n, std::uint32_t k_max,
                                           std::uint64_t seed) {
  DoublingRankEstimator est(n, k_max, seed);
  for (const auto& up : updates) est.update(up);
  return est.readout();
}

}  // namespace streammatch
