#pragma once

// Test-only brute-force oracles, kept independent of the library's
// implementations on purpose.

#include <vector>

#include "streammatch/core.hpp"

namespace testutil {

struct EnumBest {
  long long size = 0;
  long long weight = 0;
};

// Enumerates every matching of the graph.
inline void enum_step(const std::vector<streammatch::WeightedEdge>& edges, std::size_t idx,
                      std::vector<bool>& used, long long size, long long weight,
                      EnumBest& best) {
  if (size > best.size) best.size = size;
  if (weight > best.weight) best.weight = weight;
  for (std::size_t i = idx; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (used[e.u] || used[e.v]) continue;
    used[e.u] = used[e.v] = true;
    enum_step(edges, i + 1, used, size + 1, weight + e.w, best);
    used[e.u] = used[e.v] = false;
  }
}

inline EnumBest enumerate_matchings(const streammatch::GraphSnapshot& g) {
  EnumBest best;
  std::vector<bool> used(g.n, false);
  enum_step(g.edges, 0, used, 0, 0, best);
  return best;
}

}  // namespace testutil
