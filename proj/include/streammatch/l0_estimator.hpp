#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "streammatch/field.hpp"
#include "streammatch/rng.hpp"
#include "streammatch/serialize.hpp"

// Turnstile distinct-count estimator: (1 +- eps) * ||x||_0 with failure
// probability at most delta over its seeds.
//
// Construction: geometric subsampling levels; a coordinate lives in levels
// 0..tz(h(i)). Each level hashes surviving coordinates into K = O(1/eps^2)
// buckets holding (net count, fingerprint sum); a bucket is occupied iff its
// fingerprint is nonzero, so insert/delete pairs cancel exactly. The
// estimate inverts bucket occupancy at the first level that is not
// overloaded and rescales by 2^level; the median over independent copies
// drives the failure probability down to delta.

namespace streammatch {

class L0Estimator {
 public:
  L0Estimator(std::uint64_t dimension, double eps, double delta, std::uint64_t seed)
      : dim_(dimension), eps_(eps), delta_(delta), seed_(seed) {
    levels_ = level_count(dimension);
    copies_ = copy_count(delta);
    buckets_ = bucket_count(eps);
    cells_.assign(static_cast<std::size_t>(copies_) * levels_ * buckets_, Cell{});
    level_seeds_.resize(copies_);
    fp_seeds_.resize(copies_);
    bucket_seeds_.resize(static_cast<std::size_t>(copies_) * levels_);
    for (int r = 0; r < copies_; ++r) {
      level_seeds_[r] = derive(seed_, 11, r);
      fp_seeds_[r] = derive(seed_, 12, r);
      for (int j = 0; j < levels_; ++j)
        bucket_seeds_[static_cast<std::size_t>(r) * levels_ + j] =
            derive(seed_, 13, r * 64 + j);
    }
  }

  void update(std::uint64_t coord, std::int64_t delta) {
    if (delta == 0) return;
    for (int r = 0; r < copies_; ++r) {
      int top = std::min<int>(levels_ - 1,
                              std::countr_zero(prf64(level_seeds_[r], coord) | (1ULL << 63)));
      Fp61 fp = Fp61::from_signed(delta) * prf_field(fp_seeds_[r], coord);
      for (int j = 0; j <= top; ++j) {
        std::uint64_t b =
            prf64(bucket_seeds_[static_cast<std::size_t>(r) * levels_ + j], coord) % buckets_;
        Cell& c = cell(r, j, b);
        c.count += delta;
        c.fp += fp;
      }
    }
  }

  // Median over copies of the occupancy-inversion estimate.
  double estimate() const {
    std::vector<double> per_copy(copies_);
    for (int r = 0; r < copies_; ++r) per_copy[r] = copy_estimate(r);
    std::sort(per_copy.begin(), per_copy.end());
    return per_copy[copies_ / 2];
  }

  bool is_zero_state() const {
    for (const Cell& c : cells_)
      if (c.count != 0 || !c.fp.is_zero()) return false;
    return true;
  }

  long long size_words() const { return static_cast<long long>(cells_.size()) * 2 + 8; }

  std::vector<std::uint8_t> serialize() const {
    BlobWriter w(SketchKind::kL0Estimator,
                 {dim_, double_bits(eps_), double_bits(delta_), seed_});
    for (const Cell& c : cells_) {
      w.put_signed(c.count);
      w.put64(c.fp.value());
    }
    return w.take();
  }

  static L0Estimator deserialize(const std::vector<std::uint8_t>& bytes) {
    BlobReader r(bytes, SketchKind::kL0Estimator);
    const auto& p = r.params();
    L0Estimator sk(p[0], bits_double(p[1]), bits_double(p[2]), p[3]);
    for (Cell& c : sk.cells_) {
      c.count = r.get_signed();
      c.fp = Fp61::raw(r.get64());
    }
    return sk;
  }

  double eps() const { return eps_; }
  double delta() const { return delta_; }

 private:
  struct Cell {
    std::int64_t count = 0;
    Fp61 fp;
  };

  static int level_count(std::uint64_t dim) {
    int l = 1;
    while ((1ULL << l) < dim && l < 62) ++l;
    return l + 2;
  }
  static int copy_count(double delta) {
    int k = static_cast<int>(std::ceil(std::log(1.0 / std::max(delta, 1e-12))));
    return 2 * std::max(1, k) + 1;
  }
  static int bucket_count(double eps) {
    return std::max(8, static_cast<int>(std::ceil(16.0 / (eps * eps))));
  }

  Cell& cell(int r, int j, std::uint64_t b) {
    return cells_[(static_cast<std::size_t>(r) * levels_ + j) * buckets_ + b];
  }
  const Cell& cell(int r, int j, std::uint64_t b) const {
    return cells_[(static_cast<std::size_t>(r) * levels_ + j) * buckets_ + b];
  }

  double copy_estimate(int r) const {
    const double K = static_cast<double>(buckets_);
    const double cap = 0.6 * K;
    for (int j = 0; j < levels_; ++j) {
      int occupied = 0;
      for (int b = 0; b < buckets_; ++b) {
        const Cell& c = cell(r, j, b);
        if (c.count != 0 || !c.fp.is_zero()) ++occupied;
      }
      if (occupied <= cap) {
        if (occupied == 0) return 0.0;
        return -K * std::log1p(-static_cast<double>(occupied) / K) * std::ldexp(1.0, j);
      }
    }
    // Every level overloaded (can only happen with adversarial collisions);
    // fall back to the top level's saturated read.
    int occupied = 0;
    for (int b = 0; b < buckets_; ++b) {
      const Cell& c = cell(r, levels_ - 1, b);
      if (c.count != 0 || !c.fp.is_zero()) ++occupied;
    }
    occupied = std::min(occupied, buckets_ - 1);
    return -K * std::log1p(-static_cast<double>(occupied) / K) * std::ldexp(1.0, levels_ - 1);
  }

  static std::uint64_t double_bits(double d) {
    std::uint64_t u;
    static_assert(sizeof(u) == sizeof(d));
    std::memcpy(&u, &d, 8);
    return u;
  }
  static double bits_double(std::uint64_t u) {
    double d;
    std::memcpy(&d, &u, 8);
    return d;
  }

  std::uint64_t dim_;
  double eps_, delta_;
  std::uint64_t seed_;
  int levels_, copies_, buckets_;
  std::vector<Cell> cells_;
  std::vector<std::uint64_t> level_seeds_, fp_seeds_, bucket_seeds_;
};

}  // namespace streammatch
