#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/matching.hpp"
#include "streammatch/rank_partition.hpp"
#include "streammatch/rational.hpp"
#include "streammatch/rng.hpp"

// Offline reference decomposition: walk the weight ranks from heaviest to
// lightest, take a greedy maximal matching among the rank's edges whose
// endpoints are still free, and remove the matched vertices. The rounded
// value sum r_i * |M_i| sits within [w(M*)/8, w(M*)] of the optimal weighted
// matching, which is what the streaming combinator is judged against.
// Greedy tie-breaking is the seeded canonical edge order.

namespace streammatch {

struct RankDecomposition {
  int top_rank = -1;                    // largest nonempty rank; -1 when no edges
  std::vector<long long> layer_sizes;   // |M_i| for i = 0..top_rank
  std::vector<long long> suffix_sizes;  // S_i = sum_{j >= i} |M_j|
  std::vector<WeightedEdge> matching;   // union of the layers

  Rational rounded_value() const {
    Rational sum;
    for (int i = 0; i <= top_rank; ++i)
      sum += Rational(representative(i)) * Rational(layer_sizes[i]);
    return sum;
  }

  long long matched_weight() const {
    long long w = 0;
    for (const auto& e : matching) w += e.w;
    return w;
  }
};

inline RankDecomposition reference_decomposition(const GraphSnapshot& g, std::uint64_t seed) {
  RankDecomposition out;
  std::vector<std::vector<WeightedEdge>> by_rank;
  for (const auto& e : g.edges) {
    int r = rank_of(e.w);
    if (static_cast<int>(by_rank.size()) <= r) by_rank.resize(r + 1);
    by_rank[r].push_back(e);
  }
  out.top_rank = static_cast<int>(by_rank.size()) - 1;
  if (out.top_rank < 0) return out;

  out.layer_sizes.assign(out.top_rank + 1, 0);
  std::vector<bool> matched(g.n, false);
  for (int i = out.top_rank; i >= 0; --i) {
    auto& layer = by_rank[i];
    std::sort(layer.begin(), layer.end(), [&](const WeightedEdge& a, const WeightedEdge& b) {
      std::uint64_t ka = prf64(seed, edge_pair_id(a)), kb = prf64(seed, edge_pair_id(b));
      if (ka != kb) return ka < kb;
      return edge_pair_id(a) < edge_pair_id(b);
    });
    for (const auto& e : layer) {
      if (!matched[e.u] && !matched[e.v]) {
        matched[e.u] = matched[e.v] = true;
        out.matching.push_back(e);
        ++out.layer_sizes[i];
      }
    }
  }
  out.suffix_sizes.assign(out.top_rank + 1, 0);
  long long acc = 0;
  for (int i = out.top_rank; i >= 0; --i) {
    acc += out.layer_sizes[i];
    out.suffix_sizes[i] = acc;
  }
  return out;
}

}  // namespace streammatch
