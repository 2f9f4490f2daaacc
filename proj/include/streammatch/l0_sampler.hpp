#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <vector>

#include "streammatch/field.hpp"
#include "streammatch/rng.hpp"
#include "streammatch/serialize.hpp"

// Turnstile l0 sampler: returns a uniformly random nonzero coordinate of the
// maintained vector, or FAIL with probability at most delta.
//
// Each repetition keeps one single-sparsity tester per geometric level:
// (net count, key sum, fingerprint sum), all linear. A level cell that holds
// exactly one surviving coordinate reveals it as keysum/count, and the
// fingerprint equation rejects multi-coordinate impostors, so a reported
// sample is always a live coordinate. Conditioned on success the sample is
// uniform by symmetry of the level hashes.

namespace streammatch {

struct L0Sample {
  std::uint64_t coord = 0;
  std::int64_t value = 0;
};

enum class L0SampleStatus { kOk, kEmpty, kFail };

struct L0SampleResult {
  L0SampleStatus status = L0SampleStatus::kFail;
  L0Sample sample;
};

class L0Sampler {
 public:
  L0Sampler(std::uint64_t dimension, double delta, std::uint64_t seed)
      : dim_(dimension), delta_(delta), seed_(seed) {
    levels_ = level_count(dimension);
    reps_ = rep_count(delta);
    cells_.assign(static_cast<std::size_t>(reps_) * levels_, Cell{});
    level_seeds_.resize(reps_);
    fp_seeds_.resize(reps_);
    for (int r = 0; r < reps_; ++r) {
      level_seeds_[r] = derive(seed_, 21, r);
      fp_seeds_[r] = derive(seed_, 22, r);
    }
  }

  void update(std::uint64_t coord, std::int64_t delta) {
    if (delta == 0) return;
    Fp61 d = Fp61::from_signed(delta);
    Fp61 key = d * Fp61(coord % Fp61::kP + 1);
    for (int r = 0; r < reps_; ++r) {
      int top = std::min<int>(levels_ - 1, level_of(r, coord));
      Fp61 fp = d * fingerprint(r, coord);
      for (int j = 0; j <= top; ++j) {
        Cell& c = cell(r, j);
        c.count += delta;
        c.keysum += key;
        c.fp += fp;
      }
    }
  }

  L0SampleResult sample() const {
    bool any_mass = false;
    for (int r = 0; r < reps_; ++r) {
      const Cell& base = cell(r, 0);
      if (base.count != 0 || !base.keysum.is_zero() || !base.fp.is_zero()) any_mass = true;
    }
    if (!any_mass) return {L0SampleStatus::kEmpty, {}};

    for (int r = 0; r < reps_; ++r) {
      for (int j = levels_ - 1; j >= 0; --j) {
        const Cell& c = cell(r, j);
        if (c.count == 0) continue;
        Fp61 cnt = Fp61::from_signed(c.count);
        if (cnt.is_zero()) continue;
        std::uint64_t key = (c.keysum * cnt.inv()).value();
        if (key == 0 || key > dim_) continue;
        std::uint64_t coord = key - 1;
        if (level_of(r, coord) < j) continue;
        if (c.fp != cnt * fingerprint(r, coord)) continue;
        return {L0SampleStatus::kOk, {coord, c.count}};
      }
    }
    return {L0SampleStatus::kFail, {}};
  }

  bool is_zero_state() const {
    for (const Cell& c : cells_)
      if (c.count != 0 || !c.keysum.is_zero() || !c.fp.is_zero()) return false;
    return true;
  }

  long long size_words() const { return static_cast<long long>(cells_.size()) * 3 + 8; }

  std::vector<std::uint8_t> serialize() const {
    BlobWriter w(SketchKind::kL0Sampler, {dim_, double_bits(delta_), seed_});
    for (const Cell& c : cells_) {
      w.put_signed(c.count);
      w.put64(c.keysum.value());
      w.put64(c.fp.value());
    }
    return w.take();
  }

  static L0Sampler deserialize(const std::vector<std::uint8_t>& bytes) {
    BlobReader r(bytes, SketchKind::kL0Sampler);
    const auto& p = r.params();
    L0Sampler sk(p[0], bits_double(p[1]), p[2]);
    for (Cell& c : sk.cells_) {
      c.count = r.get_signed();
      c.keysum = Fp61::raw(r.get64());
      c.fp = Fp61::raw(r.get64());
    }
    return sk;
  }

 private:
  struct Cell {
    std::int64_t count = 0;
    Fp61 keysum;
    Fp61 fp;
  };

  static int level_count(std::uint64_t dim) {
    int l = 1;
    while ((1ULL << l) < dim && l < 62) ++l;
    return l + 2;
  }
  static int rep_count(double delta) {
    // One repetition finds a single-sparse level with constant probability;
    // empirically >= 0.45 across loads, so ~3.3 ln(1/delta) reps suffice.
    int k = static_cast<int>(std::ceil(3.4 * std::log(1.0 / std::max(delta, 1e-12))));
    return std::max(4, k);
  }

  int level_of(int r, std::uint64_t coord) const {
    return std::countr_zero(prf64(level_seeds_[r], coord) | (1ULL << 62));
  }
  Fp61 fingerprint(int r, std::uint64_t coord) const {
    return prf_field(fp_seeds_[r], coord);
  }

  Cell& cell(int r, int j) { return cells_[static_cast<std::size_t>(r) * levels_ + j]; }
  const Cell& cell(int r, int j) const {
    return cells_[static_cast<std::size_t>(r) * levels_ + j];
  }

  static std::uint64_t double_bits(double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, 8);
    return u;
  }
  static double bits_double(std::uint64_t u) {
    double d;
    std::memcpy(&d, &u, 8);
    return d;
  }

  std::uint64_t dim_;
  double delta_;
  std::uint64_t seed_;
  int levels_, reps_;
  std::vector<Cell> cells_;
  std::vector<std::uint64_t> level_seeds_, fp_seeds_;
};

}  // namespace streammatch
