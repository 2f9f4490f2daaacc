#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "streammatch/rng.hpp"

// Arithmetic modulo the Mersenne prime p = 2^61 - 1, and Gaussian
// elimination over that field. The prime is large enough that the
// Schwartz-Zippel failure probability n^2/p of every randomized rank test in
// this library is negligible at the scales we run.

namespace streammatch {

class Fp61 {
 public:
  static constexpr std::uint64_t kP = (1ULL << 61) - 1;

  constexpr Fp61() : v_(0) {}
  constexpr explicit Fp61(std::uint64_t v) : v_(v % kP) {}

  static Fp61 from_signed(std::int64_t x) {
    if (x >= 0) return Fp61(static_cast<std::uint64_t>(x));
    std::uint64_t r = static_cast<std::uint64_t>(-(x + 1)) + 1;  // |x|
    r %= kP;
    return Fp61(r == 0 ? 0 : kP - r);
  }

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  friend Fp61 operator+(Fp61 a, Fp61 b) {
    std::uint64_t r = a.v_ + b.v_;
    if (r >= kP) r -= kP;
    return Fp61::raw(r);
  }
  friend Fp61 operator-(Fp61 a, Fp61 b) {
    std::uint64_t r = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + kP - b.v_;
    return Fp61::raw(r);
  }
  friend Fp61 operator-(Fp61 a) { return Fp61::raw(a.v_ == 0 ? 0 : kP - a.v_); }
  friend Fp61 operator*(Fp61 a, Fp61 b) {
    __uint128_t t = static_cast<__uint128_t>(a.v_) * b.v_;
    std::uint64_t lo = static_cast<std::uint64_t>(t) & kP;
    std::uint64_t hi = static_cast<std::uint64_t>(t >> 61);
    std::uint64_t r = lo + hi;
    if (r >= kP) r -= kP;
    return Fp61::raw(r);
  }
  Fp61& operator+=(Fp61 b) { return *this = *this + b; }
  Fp61& operator-=(Fp61 b) { return *this = *this - b; }
  Fp61& operator*=(Fp61 b) { return *this = *this * b; }
  friend bool operator==(Fp61 a, Fp61 b) { return a.v_ == b.v_; }
  friend bool operator!=(Fp61 a, Fp61 b) { return a.v_ != b.v_; }

  Fp61 pow(std::uint64_t e) const {
    Fp61 base = *this, acc = Fp61::raw(1);
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  Fp61 inv() const {
    assert(v_ != 0);
    return pow(kP - 2);
  }

  static constexpr Fp61 raw(std::uint64_t v) {
    Fp61 f;
    f.v_ = v;
    return f;
  }

 private:
  std::uint64_t v_;
};

// PRF output mapped into the field. The fold from 64 bits introduces a
// relative bias of ~2^-58, irrelevant for rank tests.
inline Fp61 prf_field(std::uint64_t seed, std::uint64_t x) {
  return Fp61(prf64(seed, x));
}

// In-place row echelon; returns the rank. Destroys `m`.
inline int fp_rank(std::vector<std::vector<Fp61>>& m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (!m[r][c].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    Fp61 pinv = m[rank][c].inv();
    for (int j = c; j < cols; ++j) m[rank][j] *= pinv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][c].is_zero()) continue;
      Fp61 f = m[r][c];
      for (int j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace streammatch
