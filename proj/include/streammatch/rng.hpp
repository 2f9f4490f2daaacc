#pragma once

#include <cstdint>
#include <random>

// Seed derivation and pseudorandom functions. All randomness in the library
// flows from a single 64-bit run seed; subcomponents get subseeds via
// derive(), and per-item values (sketch indeterminates, hash buckets, level
// assignments) come from prf64(). Both are stateless, so deletions can
// regenerate exactly the values used at insertion time.

namespace streammatch {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Subseed for a named subcomponent. Chain calls to derive deeper.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag + 0x1234abcd9876ef01ULL));
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive(derive(seed, a), b);
}

// Stateless PRF: value for item x under this seed.
inline std::uint64_t prf64(std::uint64_t seed, std::uint64_t x) {
  return splitmix64(seed ^ splitmix64(x ^ 0x5851f42d4c957f2dULL));
}

inline std::uint64_t prf64(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return prf64(prf64(seed, a), b);
}

// Uniform double in [0,1).
inline double prf_unit(std::uint64_t seed, std::uint64_t x) {
  return static_cast<double>(prf64(seed, x) >> 11) * 0x1.0p-53;
}

// Seeded engine for generator-side shuffles and samples (not used inside
// sketches, which must be stateless).
inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed ^ 0xc0ffee123456789aULL));
}

}  // namespace streammatch
