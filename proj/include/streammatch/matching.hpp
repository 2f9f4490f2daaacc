#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/rng.hpp"

// Exact matching oracles and the greedy maximal matching.
//
// exact_max_matching: maximum-cardinality matching in a general graph.
// Degree-1 vertices are peeled first (matching a leaf to its neighbor is
// always safe by the standard exchange argument), which solves forests
// outright and shrinks sparse graphs a lot; the remaining core goes through
// an augmenting-path search with blossom contraction, seeded by a greedy
// matching.
//
// exact_max_weight_matching: maximum-weight matching by dynamic programming
// over vertex subsets, capped at n = 24.

namespace streammatch {

struct MatchingOracleResult {
  long long size = 0;
  long long weight = 0;
  std::vector<WeightedEdge> edges;
};

struct InstanceTooLarge : std::runtime_error {
  explicit InstanceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Blossom search on a compact adjacency structure. Standard formulation:
// one BFS per exposed vertex, contracting odd cycles via the base[] array.
class BlossomMatcher {
 public:
  explicit BlossomMatcher(int n) : n_(n), adj_(n), match_(n, -1) {}

  void add_edge(int u, int v) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }

  void seed_greedy() {
    for (int v = 0; v < n_; ++v) {
      if (match_[v] != -1) continue;
      for (int to : adj_[v]) {
        if (match_[to] == -1) {
          match_[v] = to;
          match_[to] = v;
          break;
        }
      }
    }
  }

  const std::vector<int>& solve() {
    seed_greedy();
    p_.assign(n_, -1);
    base_.resize(n_);
    used_.resize(n_);
    for (int v = 0; v < n_; ++v) {
      if (match_[v] == -1) try_augment(v);
    }
    return match_;
  }

 private:
  void mark_path(int v, int b, int child, std::vector<bool>& in_blossom) {
    while (base_[v] != b) {
      in_blossom[base_[v]] = true;
      in_blossom[base_[match_[v]]] = true;
      p_[v] = child;
      child = match_[v];
      v = p_[match_[v]];
    }
  }

  int lca(int a, int b) {
    std::vector<bool> seen(n_, false);
    int x = a;
    while (true) {
      x = base_[x];
      seen[x] = true;
      if (match_[x] == -1) break;
      x = p_[match_[x]];
    }
    int y = b;
    while (true) {
      y = base_[y];
      if (seen[y]) return y;
      y = p_[match_[y]];
    }
  }

  void try_augment(int root) {
    std::fill(used_.begin(), used_.end(), false);
    std::fill(p_.begin(), p_.end(), -1);
    for (int i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = true;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int to : adj_[v]) {
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != -1 && p_[match_[to]] != -1)) {
          int b = lca(v, to);
          std::vector<bool> in_blossom(n_, false);
          mark_path(v, b, to, in_blossom);
          mark_path(to, b, v, in_blossom);
          for (int i = 0; i < n_; ++i) {
            if (in_blossom[base_[i]]) {
              base_[i] = b;
              if (!used_[i]) {
                used_[i] = true;
                q.push(i);
              }
            }
          }
        } else if (p_[to] == -1) {
          p_[to] = v;
          if (match_[to] == -1) {
            augment_along(to);
            return;
          }
          used_[match_[to]] = true;
          q.push(match_[to]);
        }
      }
    }
  }

  void augment_along(int v) {
    while (v != -1) {
      int pv = p_[v];
      int next = match_[pv];
      match_[v] = pv;
      match_[pv] = v;
      v = next;
    }
  }

  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_;
  std::vector<int> p_, base_;
  std::vector<bool> used_;
};

}  // namespace detail

inline MatchingOracleResult exact_max_matching(const GraphSnapshot& g) {
  MatchingOracleResult result;
  const std::uint32_t n = g.n;

  // Peel degree-1 vertices; each peeled leaf edge joins the matching.
  std::vector<std::vector<std::uint32_t>> adj = g.adjacency();
  std::vector<std::uint32_t> deg = g.degrees();
  std::vector<bool> removed(n, false), edge_dead(g.edges.size(), false);
  std::queue<std::uint32_t> leaves;
  for (std::uint32_t v = 0; v < n; ++v)
    if (deg[v] == 1) leaves.push(v);

  auto drop_vertex = [&](std::uint32_t v) {
    removed[v] = true;
    for (std::uint32_t ei : adj[v]) {
      if (edge_dead[ei]) continue;
      edge_dead[ei] = true;
      const WeightedEdge& e = g.edges[ei];
      std::uint32_t other = (e.u == v) ? e.v : e.u;
      if (--deg[other] == 1 && !removed[other]) leaves.push(other);
    }
  };

  while (!leaves.empty()) {
    std::uint32_t v = leaves.front();
    leaves.pop();
    if (removed[v] || deg[v] != 1) continue;
    std::uint32_t ei_live = 0;
    bool found = false;
    for (std::uint32_t ei : adj[v]) {
      if (!edge_dead[ei]) {
        ei_live = ei;
        found = true;
        break;
      }
    }
    if (!found) continue;
    const WeightedEdge& e = g.edges[ei_live];
    result.edges.push_back(e);
    std::uint32_t u = (e.u == v) ? e.v : e.u;
    drop_vertex(v);
    drop_vertex(u);
  }

  // Compact the surviving core and run the blossom search on it.
  std::vector<int> label(n, -1);
  int core_n = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!removed[v] && deg[v] > 0) label[v] = core_n++;
  }
  if (core_n > 0) {
    detail::BlossomMatcher matcher(core_n);
    for (std::uint32_t ei = 0; ei < g.edges.size(); ++ei) {
      if (edge_dead[ei]) continue;
      matcher.add_edge(label[g.edges[ei].u], label[g.edges[ei].v]);
    }
    const std::vector<int>& match = matcher.solve();
    std::vector<std::uint32_t> unlabel(core_n);
    for (std::uint32_t v = 0; v < n; ++v)
      if (label[v] >= 0) unlabel[label[v]] = v;
    for (int v = 0; v < core_n; ++v) {
      if (match[v] > v) {
        std::uint32_t a = unlabel[v], b = unlabel[match[v]];
        for (std::uint32_t ei : adj[a]) {
          const WeightedEdge& e = g.edges[ei];
          if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) {
            result.edges.push_back(e);
            break;
          }
        }
      }
    }
  }

  result.size = static_cast<long long>(result.edges.size());
  for (const auto& e : result.edges) result.weight += e.w;
  return result;
}

inline long long max_matching_size(const GraphSnapshot& g) {
  return exact_max_matching(g).size;
}

inline MatchingOracleResult exact_max_weight_matching(const GraphSnapshot& g) {
  const std::uint32_t n = g.n;
  if (n > 24) throw InstanceTooLarge("weighted oracle capped at n = 24");

  std::vector<std::uint32_t> adj_mask(n, 0);
  std::vector<std::vector<Weight>> w(n, std::vector<Weight>(n, 0));
  for (const auto& e : g.edges) {
    adj_mask[e.u] |= 1u << e.v;
    adj_mask[e.v] |= 1u << e.u;
    w[e.u][e.v] = w[e.v][e.u] = e.w;
  }

  const std::uint32_t full = (n == 0) ? 0 : ((n == 32 ? 0 : (1u << n)) - 1);
  std::vector<long long> dp(static_cast<std::size_t>(full) + 1, 0);
  for (std::uint32_t s = 1; s <= full && n > 0; ++s) {
    std::uint32_t v = static_cast<std::uint32_t>(__builtin_ctz(s));
    long long best = dp[s & (s - 1)];  // leave v unmatched
    std::uint32_t cand = adj_mask[v] & s;
    while (cand) {
      std::uint32_t u = static_cast<std::uint32_t>(__builtin_ctz(cand));
      cand &= cand - 1;
      long long with = w[v][u] + dp[s & ~((1u << v) | (1u << u))];
      if (with > best) best = with;
    }
    dp[s] = best;
  }

  MatchingOracleResult result;
  // Recover a witness by re-walking the optimal decisions.
  std::uint32_t s = full;
  while (s) {
    std::uint32_t v = static_cast<std::uint32_t>(__builtin_ctz(s));
    if (dp[s] == dp[s & (s - 1)]) {
      s &= s - 1;
      continue;
    }
    std::uint32_t cand = adj_mask[v] & s;
    while (cand) {
      std::uint32_t u = static_cast<std::uint32_t>(__builtin_ctz(cand));
      cand &= cand - 1;
      std::uint32_t rest = s & ~((1u << v) | (1u << u));
      if (dp[s] == w[v][u] + dp[rest]) {
        result.edges.emplace_back(v, u, w[v][u]);
        s = rest;
        break;
      }
    }
  }
  result.size = static_cast<long long>(result.edges.size());
  for (const auto& e : result.edges) result.weight += e.w;
  return result;
}

// Greedy maximal matching in seeded canonical order: edges ordered by a PRF
// of their pair id, ties by the id itself. Deterministic per seed.
inline std::vector<WeightedEdge> greedy_maximal_matching(const GraphSnapshot& g,
                                                         std::uint64_t seed) {
  std::vector<std::uint32_t> order(g.edges.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::uint64_t> key(g.edges.size());
  for (std::uint32_t i = 0; i < g.edges.size(); ++i)
    key[i] = prf64(seed, edge_pair_id(g.edges[i]));
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return edge_pair_id(g.edges[a]) < edge_pair_id(g.edges[b]);
  });
  std::vector<bool> matched(g.n, false);
  std::vector<WeightedEdge> m;
  for (std::uint32_t i : order) {
    const WeightedEdge& e = g.edges[i];
    if (!matched[e.u] && !matched[e.v]) {
      matched[e.u] = matched[e.v] = true;
      m.push_back(e);
    }
  }
  return m;
}

inline bool is_valid_matching(const GraphSnapshot& g, const std::vector<WeightedEdge>& m) {
  std::vector<bool> used(g.n, false);
  for (const auto& e : m) {
    if (e.u >= g.n || e.v >= g.n || e.u == e.v) return false;
    if (used[e.u] || used[e.v]) return false;
    used[e.u] = used[e.v] = true;
    if (!std::binary_search(g.edges.begin(), g.edges.end(), e)) return false;
  }
  return true;
}

}  // namespace streammatch
