#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/rng.hpp"

// Test-instance generators. All take an explicit seed and are deterministic.

namespace streammatch {

// Uniform random recursive tree on [0, n): vertex v >= 1 attaches to a
// uniform earlier vertex, then labels are shuffled.
inline std::vector<WeightedEdge> random_tree_edges(std::uint32_t n, std::uint64_t seed) {
  auto eng = make_engine(seed);
  std::vector<std::uint32_t> relabel(n);
  for (std::uint32_t i = 0; i < n; ++i) relabel[i] = i;
  std::shuffle(relabel.begin(), relabel.end(), eng);
  std::vector<WeightedEdge> edges;
  edges.reserve(n > 0 ? n - 1 : 0);
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uint32_t u = static_cast<std::uint32_t>(eng() % v);
    edges.emplace_back(relabel[u], relabel[v], 1);
  }
  return edges;
}

inline StreamSource gen_random_tree(std::uint32_t n, std::uint64_t seed) {
  StreamSource s;
  s.n = n;
  s.weighted = false;
  auto edges = random_tree_edges(n, derive(seed, 1));
  auto eng = make_engine(derive(seed, 2));
  std::shuffle(edges.begin(), edges.end(), eng);
  s.passes.emplace_back();
  for (const auto& e : edges) s.passes[0].emplace_back(+1, e);
  return s;
}

// Union of nu random spanning trees, deduplicated. Arboricity <= nu by
// construction (the edge set is covered by nu forests).
inline StreamSource gen_bounded_arboricity(std::uint32_t n, std::uint32_t nu,
                                           std::uint64_t seed) {
  std::set<std::uint64_t> seen;
  std::vector<WeightedEdge> edges;
  for (std::uint32_t f = 0; f < nu; ++f) {
    for (const auto& e : random_tree_edges(n, derive(seed, 10 + f))) {
      if (seen.insert(edge_pair_id(e)).second) edges.push_back(e);
    }
  }
  auto eng = make_engine(derive(seed, 3));
  std::shuffle(edges.begin(), edges.end(), eng);
  StreamSource s;
  s.n = n;
  s.weighted = false;
  s.passes.emplace_back();
  for (const auto& e : edges) s.passes[0].emplace_back(+1, e);
  return s;
}

enum class WeightLaw { kUniform, kLogUniform };

// Reweights the final edges of a base stream with weights in [1, W].
// kLogUniform spreads weights across all power-of-two ranks.
inline StreamSource gen_weighted(const StreamSource& base, Weight W, WeightLaw law,
                                 std::uint64_t seed) {
  StreamSource s;
  s.n = base.n;
  s.weighted = true;
  s.declared_max_weight = W;
  s.passes.resize(base.passes.size());
  std::uint64_t wseed = derive(seed, 4);
  for (std::size_t p = 0; p < base.passes.size(); ++p) {
    for (const auto& up : base.passes[p]) {
      WeightedEdge e = up.edge;
      std::uint64_t id = edge_pair_id(e);
      if (law == WeightLaw::kUniform) {
        e.w = 1 + static_cast<Weight>(prf64(wseed, id) % static_cast<std::uint64_t>(W));
      } else {
        double u = prf_unit(wseed, id);
        e.w = static_cast<Weight>(std::floor(std::pow(2.0, u * std::log2(static_cast<double>(W)))));
        e.w = std::max<Weight>(1, std::min<Weight>(W, e.w));
      }
      s.passes[p].emplace_back(up.sign, e);
    }
  }
  return s;
}

// Interleaves deletion churn into a single-pass insertion stream: some real
// edges get deleted and reinserted, and decoy edges (pairs absent from the
// final graph) get inserted then deleted. The final snapshot is unchanged.
// churn = 0 returns the input untouched.
inline StreamSource shuffle_with_deletions(const StreamSource& in, double churn,
                                           std::uint64_t seed) {
  if (churn <= 0.0) return in;
  const auto& ups = in.updates();
  auto eng = make_engine(derive(seed, 5));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::set<std::uint64_t> real_pairs;
  for (const auto& up : ups) real_pairs.insert(edge_pair_id(up.edge));

  struct TimedOp {
    double t;
    EdgeUpdate up;
  };
  std::vector<TimedOp> ops;

  auto sorted_times = [&](int k) {
    std::vector<double> ts(k);
    for (auto& t : ts) t = unit(eng);
    std::sort(ts.begin(), ts.end());
    return ts;
  };

  for (const auto& up : ups) {
    if (up.sign < 0) {
      // Churn only applies to pure insertion streams; pass others through.
      return in;
    }
    if (unit(eng) < churn) {
      auto ts = sorted_times(3);
      ops.push_back({ts[0], EdgeUpdate(+1, up.edge)});
      ops.push_back({ts[1], EdgeUpdate(-1, up.edge)});
      ops.push_back({ts[2], EdgeUpdate(+1, up.edge)});
    } else {
      ops.push_back({unit(eng), up});
    }
  }

  std::size_t decoys = static_cast<std::size_t>(churn * static_cast<double>(ups.size()));
  std::set<std::uint64_t> decoy_pairs;
  Weight wmax = in.declared_max_weight > 0 ? in.declared_max_weight : 1;
  for (std::size_t d = 0; d < decoys && in.n >= 2; ++d) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::uint32_t u = static_cast<std::uint32_t>(eng() % in.n);
      std::uint32_t v = static_cast<std::uint32_t>(eng() % in.n);
      if (u == v) continue;
      std::uint64_t id = edge_pair_id(u, v);
      if (real_pairs.count(id) || decoy_pairs.count(id)) continue;
      decoy_pairs.insert(id);
      Weight w = in.weighted ? 1 + static_cast<Weight>(eng() % static_cast<std::uint64_t>(wmax)) : 1;
      WeightedEdge e(u, v, w);
      auto ts = sorted_times(2);
      ops.push_back({ts[0], EdgeUpdate(+1, e)});
      ops.push_back({ts[1], EdgeUpdate(-1, e)});
      break;
    }
  }

  std::stable_sort(ops.begin(), ops.end(),
                   [](const TimedOp& a, const TimedOp& b) { return a.t < b.t; });
  StreamSource out;
  out.n = in.n;
  out.weighted = in.weighted;
  out.declared_max_weight = in.declared_max_weight;
  out.passes.emplace_back();
  for (const auto& op : ops) out.passes[0].push_back(op.up);
  return out;
}

// Erdos-Renyi-style random weighted graph stream for oracle-vs-estimator
// experiments at small n.
inline StreamSource gen_random_weighted_graph(std::uint32_t n, double density, Weight W,
                                              WeightLaw law, std::uint64_t seed) {
  auto eng = make_engine(derive(seed, 6));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<WeightedEdge> edges;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (unit(eng) < density) edges.emplace_back(u, v, 1);
  std::shuffle(edges.begin(), edges.end(), eng);
  StreamSource base;
  base.n = n;
  base.weighted = false;
  base.passes.emplace_back();
  for (const auto& e : edges) base.passes[0].emplace_back(+1, e);
  return gen_weighted(base, W, law, derive(seed, 7));
}

}  // namespace streammatch
