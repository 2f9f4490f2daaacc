#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/rng.hpp"

// Boolean Hidden Hypermatching (BHH) gap instances. A BHH^0_{t,n} input is a
// bit vector x with exactly n/2 ones plus a perfect t-hypermatching on the n
// coordinates, promised that every hyperedge's bit parity equals `parity`.
// The graph reduction places two rows of n vertices, a vertical edge per
// 1-bit, and a t-clique on the bottom row per hyperedge; the two promise
// cases force maximum matchings of size 3n/4 and 3n/4 - n/(2t).

namespace streammatch {

struct BhhInstance {
  std::uint32_t t = 2;
  std::vector<std::uint8_t> x;                        // length n
  std::vector<std::vector<std::uint32_t>> hypermatching;  // n/t groups of t
  int parity = 0;

  std::uint32_t n() const { return static_cast<std::uint32_t>(x.size()); }
};

struct NonIntegral : std::runtime_error {
  explicit NonIntegral(const std::string& what) : std::runtime_error(what) {}
};

inline void validate_bhh(const BhhInstance& inst) {
  const std::uint32_t n = inst.n();
  if (inst.t < 2 || n == 0 || n % (2 * inst.t) != 0)
    throw std::invalid_argument("bhh: n must be a positive multiple of 2t");
  std::vector<bool> seen(n, false);
  for (const auto& he : inst.hypermatching) {
    if (he.size() != inst.t) throw std::invalid_argument("bhh: hyperedge arity mismatch");
    int ones = 0;
    for (auto i : he) {
      if (i >= n || seen[i]) throw std::invalid_argument("bhh: hypermatching is not a partition");
      seen[i] = true;
      ones += inst.x[i];
    }
    if (ones % 2 != inst.parity) throw std::invalid_argument("bhh: hyperedge violates parity promise");
  }
  if (inst.hypermatching.size() != n / inst.t)
    throw std::invalid_argument("bhh: wrong number of hyperedges");
  long long ones = std::accumulate(inst.x.begin(), inst.x.end(), 0LL);
  if (ones != static_cast<long long>(n) / 2)
    throw std::invalid_argument("bhh: x must have exactly n/2 ones");
}

// Reduction graph on 2n vertices: top row i in [0,n), bottom row n+i.
// Skips the parity validation so that non-promise inputs (generator-level
// tests) can still be materialized.
inline GraphSnapshot bhh_graph(const BhhInstance& inst) {
  const std::uint32_t n = inst.n();
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    if (inst.x[i]) edges.emplace_back(i, n + i, 1);
  for (const auto& he : inst.hypermatching)
    for (std::size_t a = 0; a < he.size(); ++a)
      for (std::size_t b = a + 1; b < he.size(); ++b)
        edges.emplace_back(n + he[a], n + he[b], 1);
  return make_graph(2 * n, std::move(edges));
}

// Closed-form maximum matching size of a promise-valid instance. The value
// 3n/4 - n/(2t) attaches to parity 0 for odd t and parity 1 for even t.
inline long long bhh_expected_matching(std::uint32_t n, std::uint32_t t, int parity) {
  if (t < 2 || n == 0 || n % (2 * t) != 0)
    throw std::invalid_argument("bhh: n must be a positive multiple of 2t");
  bool reduced = (t % 2 == 1) ? (parity == 0) : (parity == 1);
  long long num = reduced ? 3LL * n * t - 2LL * n : 3LL * n * t;  // value * 4t
  if (num % (4LL * t) != 0)
    throw NonIntegral("bhh: matching size formula is non-integral for this n, t");
  return num / (4LL * t);
}

// Random promise-valid instance. Requires n to make the closed form
// integral (i.e. a multiple of lcm(4, 2t)).
inline BhhInstance random_bhh_instance(std::uint32_t n, std::uint32_t t, int parity,
                                       std::uint64_t seed) {
  bhh_expected_matching(n, t, parity);  // reject non-integral n up front
  auto eng = make_engine(seed);

  BhhInstance inst;
  inst.t = t;
  inst.parity = parity;
  inst.x.assign(n, 0);

  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), eng);
  const std::uint32_t groups = n / t;
  inst.hypermatching.assign(groups, {});
  for (std::uint32_t gidx = 0; gidx < groups; ++gidx) {
    inst.hypermatching[gidx].assign(perm.begin() + gidx * t, perm.begin() + (gidx + 1) * t);
    std::sort(inst.hypermatching[gidx].begin(), inst.hypermatching[gidx].end());
  }

  // Per-group 1-bit counts: start at `parity` each, then hand out +2
  // increments until the total reaches n/2.
  std::vector<std::uint32_t> ones(groups, static_cast<std::uint32_t>(parity));
  long long remaining = static_cast<long long>(n) / 2 - static_cast<long long>(parity) * groups;
  if (remaining < 0 || remaining % 2 != 0)
    throw std::invalid_argument("bhh: no promise-valid instance for these parameters");
  while (remaining > 0) {
    std::uint32_t gidx = static_cast<std::uint32_t>(eng() % groups);
    if (ones[gidx] + 2 <= t) {
      ones[gidx] += 2;
      remaining -= 2;
    }
  }
  for (std::uint32_t gidx = 0; gidx < groups; ++gidx) {
    std::vector<std::uint32_t> members = inst.hypermatching[gidx];
    std::shuffle(members.begin(), members.end(), eng);
    for (std::uint32_t j = 0; j < ones[gidx]; ++j) inst.x[members[j]] = 1;
  }
  validate_bhh(inst);
  return inst;
}

namespace detail {

// Flip patterns for the four lifted hyperedges: flips[e] lists positions
// (0-based within the hyperedge) read from the negated copies. Flip counts
// are even exactly when the lift must preserve parity.
inline std::vector<std::vector<std::uint32_t>> lift_flip_patterns(std::uint32_t t, int w_bit) {
  std::vector<std::vector<std::uint32_t>> flips(4);
  auto range = [](std::uint32_t lo, std::uint32_t hi) {
    std::vector<std::uint32_t> r;
    for (std::uint32_t i = lo; i < hi; ++i) r.push_back(i);
    return r;
  };
  if (t % 2 == 1) {
    if (w_bit == 0) {
      flips[0] = range(1, t);              // all but position 0
      flips[1] = range(2, t);              // all but position 1
      flips[1].insert(flips[1].begin(), 0);
      flips[2] = {0, 1};
      flips[3] = {};
    } else {
      flips[0] = {0};
      flips[1] = {1};
      flips[2] = range(2, t);
      flips[3] = range(0, t);
    }
  } else {
    if (w_bit == 0) {
      flips[0] = {};
      flips[1] = {0, 1};
      flips[2] = range(2, t);
      flips[3] = range(0, t);
    } else {
      flips[0] = {0};
      flips[1] = {1};
      flips[2] = range(2, t);
      flips[2].insert(flips[2].begin(), 0);
      flips[3] = range(1, t);
    }
  }
  return flips;
}

}  // namespace detail

// Lifts a general BHH input (x, hypermatching, w) to a BHH^0 instance over
// 4n coordinates: x' = x | x | ~x | ~x, and four hyperedges per original
// one, chosen so each lifted parity equals (Mx)_l xor w_l. The per-position
// copies are dealt out so the lifted hypermatching is a perfect partition.
inline BhhInstance bhh_lift(const std::vector<std::uint8_t>& x,
                            const std::vector<std::vector<std::uint32_t>>& hypermatching,
                            const std::vector<std::uint8_t>& w) {
  const std::uint32_t n = static_cast<std::uint32_t>(x.size());
  if (hypermatching.empty() || w.size() != hypermatching.size())
    throw std::invalid_argument("bhh_lift: |w| must equal the number of hyperedges");
  const std::uint32_t t = static_cast<std::uint32_t>(hypermatching[0].size());

  BhhInstance out;
  out.t = t;
  out.x.resize(4 * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out.x[i] = x[i];
    out.x[n + i] = x[i];
    out.x[2 * n + i] = static_cast<std::uint8_t>(1 - x[i]);
    out.x[3 * n + i] = static_cast<std::uint8_t>(1 - x[i]);
  }

  int lifted_parity = -1;
  for (std::size_t l = 0; l < hypermatching.size(); ++l) {
    const auto& he = hypermatching[l];
    auto flips = detail::lift_flip_patterns(t, w[l]);
    // Deal copies: positive reads take offsets {0, n}, negated {2n, 3n}.
    std::vector<int> pos_used(t, 0), neg_used(t, 0);
    int this_parity = 0;
    for (const auto& flip : flips) {
      std::vector<bool> is_flip(t, false);
      for (auto f : flip) is_flip[f] = true;
      std::vector<std::uint32_t> lifted;
      int ones = 0;
      for (std::uint32_t k = 0; k < t; ++k) {
        std::uint32_t coord;
        if (is_flip[k]) {
          coord = (neg_used[k]++ == 0 ? 2 * n : 3 * n) + he[k];
        } else {
          coord = (pos_used[k]++ == 0 ? 0 : n) + he[k];
        }
        lifted.push_back(coord);
        ones += out.x[coord];
      }
      std::sort(lifted.begin(), lifted.end());
      out.hypermatching.push_back(std::move(lifted));
      this_parity = ones % 2;
    }
    for (std::uint32_t k = 0; k < t; ++k) {
      if (pos_used[k] != 2 || neg_used[k] != 2)
        throw std::logic_error("bhh_lift: copy dealing is not a partition");
    }
    if (lifted_parity < 0) lifted_parity = this_parity;
  }

  // All four edges of a group share one parity by construction; uniformity
  // across groups holds iff the input satisfied the promise.
  out.parity = lifted_parity;
  for (const auto& he : out.hypermatching) {
    int ones = 0;
    for (auto c : he) ones += out.x[c];
    if (ones % 2 != out.parity)
      throw std::invalid_argument("bhh_lift: input violates the promise, lift is not uniform");
  }
  return out;
}

}  // namespace streammatch
