#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "streammatch/core.hpp"

// Ground-truth graph statistics used to verify the sampling estimators:
// heavy-node / shallow-edge counts, and arboricity.

namespace streammatch {

struct HeavyShallowCounts {
  long long heavy = 0;    // vertices with degree > C
  long long shallow = 0;  // edges with both endpoints of degree <= C
};

inline HeavyShallowCounts heavy_shallow_ground_truth(const GraphSnapshot& g, long long C) {
  std::vector<std::uint32_t> deg = g.degrees();
  HeavyShallowCounts out;
  for (std::uint32_t v = 0; v < g.n; ++v)
    if (deg[v] > C) ++out.heavy;
  for (const auto& e : g.edges)
    if (deg[e.u] <= C && deg[e.v] <= C) ++out.shallow;
  return out;
}

struct ArboricityBound {
  long long value = 0;
  bool exact = false;  // false: certified upper bound only
};

// Degeneracy by iterative minimum-degree peeling. Always an upper bound on
// the arboricity.
inline long long degeneracy(const GraphSnapshot& g) {
  std::vector<std::vector<std::uint32_t>> adj = g.adjacency();
  std::vector<std::uint32_t> deg = g.degrees();
  std::vector<bool> gone(g.n, false);
  std::uint32_t maxdeg = 0;
  for (auto d : deg) maxdeg = std::max(maxdeg, d);
  std::vector<std::vector<std::uint32_t>> buckets(maxdeg + 1);
  for (std::uint32_t v = 0; v < g.n; ++v) buckets[deg[v]].push_back(v);
  long long k = 0;
  std::uint32_t processed = 0;
  std::uint32_t cursor = 0;
  while (processed < g.n) {
    while (cursor <= maxdeg && buckets[cursor].empty()) ++cursor;
    if (cursor > maxdeg) break;
    std::uint32_t v = buckets[cursor].back();
    buckets[cursor].pop_back();
    if (gone[v] || deg[v] != cursor) continue;  // stale bucket entry
    gone[v] = true;
    ++processed;
    k = std::max<long long>(k, cursor);
    for (std::uint32_t ei : adj[v]) {
      const WeightedEdge& e = g.edges[ei];
      std::uint32_t o = (e.u == v) ? e.v : e.u;
      if (!gone[o]) {
        --deg[o];
        buckets[deg[o]].push_back(o);
        if (deg[o] < cursor) cursor = deg[o];
      }
    }
  }
  return k;
}

// Arboricity a(G) = max over vertex subsets U of ceil(|E(U)| / (|U|-1)).
// Exact by subset enumeration for n <= 16; otherwise returns the tightest
// certified upper bound available (generator metadata, degeneracy).
inline ArboricityBound arboricity_upper(const GraphSnapshot& g,
                                        std::optional<long long> metadata_bound = {}) {
  if (g.n <= 16) {
    std::vector<std::uint32_t> adj_mask(g.n, 0);
    for (const auto& e : g.edges) {
      adj_mask[e.u] |= 1u << e.v;
      adj_mask[e.v] |= 1u << e.u;
    }
    long long best = g.edges.empty() ? 0 : 1;
    const std::uint32_t full = (g.n == 0) ? 0 : (1u << g.n) - 1;
    for (std::uint32_t s = full; s != 0; --s) {
      int k = std::popcount(s);
      if (k < 2) continue;
      long long inside = 0;
      std::uint32_t rest = s;
      while (rest) {
        std::uint32_t v = static_cast<std::uint32_t>(std::countr_zero(rest));
        rest &= rest - 1;
        inside += std::popcount(adj_mask[v] & s);
      }
      inside /= 2;
      long long dens = (inside + k - 2) / (k - 1);  // ceil
      best = std::max(best, dens);
    }
    return {best, true};
  }
  long long bound = degeneracy(g);
  if (metadata_bound) bound = std::min(bound, *metadata_bound);
  return {bound, false};
}

}  // namespace streammatch
