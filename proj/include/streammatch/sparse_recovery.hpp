#pragma once

#include <cstdint>
#include <cmath>
#include <cstring>
#include <map>
#include <optional>
#include <vector>

#include "streammatch/field.hpp"
#include "streammatch/rng.hpp"
#include "streammatch/serialize.hpp"

// s-sparse recovery sketch. Invertible-table construction: three subtables
// of ~2s/3 single-sparsity cells each, one hash per subtable; recovery peels
// single-sparse cells and subtracts. Fully linear, so the support may exceed
// the budget mid-stream as long as the final support fits.
//
// Contract: if the final support has at most s coordinates, recover() whp
// returns exactly the nonzero coordinates and values; if the support is
// larger it returns FAIL (either peeling stalls, or more than s items come
// out and the result is rejected). Fingerprints make a wrong recovery as
// unlikely as a field collision, never silent.

namespace streammatch {

class SparseRecovery {
 public:
  SparseRecovery(std::uint64_t dimension, std::uint64_t budget, double delta,
                 std::uint64_t seed)
      : dim_(dimension), budget_(budget == 0 ? 1 : budget), delta_(delta), seed_(seed) {
    // ~2s cells split over the three subtables; the cube-root floor keeps
    // the probability that some pair collides in all three subtables under
    // delta when the budget is small.
    double s = static_cast<double>(budget_);
    double floor_delta = std::cbrt(s * s / std::max(delta_, 1e-12));
    subtable_ = std::max<std::uint64_t>({5, (2 * budget_) / kHashes + 3,
                                         static_cast<std::uint64_t>(std::ceil(floor_delta))});
    cells_.assign(kHashes * subtable_, Cell{});
    fp_seed_ = derive(seed_, 31);
    for (unsigned h = 0; h < kHashes; ++h) hash_seeds_[h] = derive(seed_, 32, h);
  }

  void update(std::uint64_t coord, std::int64_t delta) {
    if (delta == 0) return;
    Fp61 d = Fp61::from_signed(delta);
    Fp61 key = d * Fp61(coord % Fp61::kP + 1);
    Fp61 fp = d * prf_field(fp_seed_, coord);
    for (unsigned h = 0; h < kHashes; ++h) {
      Cell& c = cells_[slot(h, coord)];
      c.count += delta;
      c.keysum += key;
      c.fp += fp;
    }
  }

  // Exact support recovery, or nullopt (FAIL).
  std::optional<std::map<std::uint64_t, std::int64_t>> recover() const {
    std::vector<Cell> work = cells_;
    std::map<std::uint64_t, std::int64_t> out;
    bool progress = true;
    std::size_t guard = 4 * (budget_ + 8);
    while (progress && guard-- > 0) {
      progress = false;
      for (std::size_t i = 0; i < work.size(); ++i) {
        Cell& c = work[i];
        if (c.count == 0) continue;
        Fp61 cnt = Fp61::from_signed(c.count);
        if (cnt.is_zero()) continue;
        std::uint64_t key = (c.keysum * cnt.inv()).value();
        if (key == 0 || key > dim_) continue;
        std::uint64_t coord = key - 1;
        Fp61 fpv = prf_field(fp_seed_, coord);
        if (c.fp != cnt * fpv) continue;
        if (slot(static_cast<unsigned>(i / subtable_), coord) != i) continue;
        std::int64_t value = c.count;
        out[coord] += value;
        if (out[coord] == 0) out.erase(coord);
        Fp61 d = Fp61::from_signed(value);
        Fp61 keyterm = d * Fp61(coord % Fp61::kP + 1);
        Fp61 fpterm = d * fpv;
        for (unsigned h = 0; h < kHashes; ++h) {
          Cell& t = work[slot(h, coord)];
          t.count -= value;
          t.keysum -= keyterm;
          t.fp -= fpterm;
        }
        progress = true;
      }
    }
    for (const Cell& c : work)
      if (c.count != 0 || !c.keysum.is_zero() || !c.fp.is_zero()) return std::nullopt;
    if (out.size() > budget_) return std::nullopt;
    return out;
  }

  bool is_zero_state() const {
    for (const Cell& c : cells_)
      if (c.count != 0 || !c.keysum.is_zero() || !c.fp.is_zero()) return false;
    return true;
  }

  std::uint64_t budget() const { return budget_; }
  long long size_words() const { return static_cast<long long>(cells_.size()) * 3 + 8; }

  std::vector<std::uint8_t> serialize() const {
    BlobWriter w(SketchKind::kSparseRecovery, {dim_, budget_, double_bits(delta_), seed_});
    for (const Cell& c : cells_) {
      w.put_signed(c.count);
      w.put64(c.keysum.value());
      w.put64(c.fp.value());
    }
    return w.take();
  }

  static SparseRecovery deserialize(const std::vector<std::uint8_t>& bytes) {
    BlobReader r(bytes, SketchKind::kSparseRecovery);
    const auto& p = r.params();
    SparseRecovery sk(p[0], p[1], bits_double(p[2]), p[3]);
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

  static constexpr unsigned kHashes = 3;

  std::size_t slot(unsigned h, std::uint64_t coord) const {
    return static_cast<std::size_t>(h) * subtable_ +
           prf64(hash_seeds_[h], coord) % subtable_;
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
  std::uint64_t budget_;
  double delta_;
  std::uint64_t seed_;
  std::uint64_t subtable_;
  std::uint64_t fp_seed_ = 0;
  std::uint64_t hash_seeds_[kHashes] = {};
  std::vector<Cell> cells_;
};

}  // namespace streammatch
