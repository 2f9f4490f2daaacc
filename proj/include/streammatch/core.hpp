#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Graph and stream data model. A dynamic graph stream is a sequence of
// signed edge updates over a vertex set [0, n) that is fixed up front. The
// consistency rules are: every edge has multiplicity 0 or 1 at every prefix,
// and a deletion carries the same weight as the insertion it cancels.

namespace streammatch {

using VertexId = std::uint32_t;
using Weight = std::int64_t;

struct WeightedEdge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 1;

  WeightedEdge() = default;
  WeightedEdge(VertexId a, VertexId b, Weight weight = 1) : u(a), v(b), w(weight) {
    if (u > v) std::swap(u, v);
  }

  bool operator==(const WeightedEdge& o) const {
    return u == o.u && v == o.v && w == o.w;
  }
  bool operator<(const WeightedEdge& o) const {
    if (u != o.u) return u < o.u;
    if (v != o.v) return v < o.v;
    return w < o.w;
  }
};

// Canonical 64-bit id of the vertex pair, weight excluded. Sketches key
// their indeterminates on this so that a delete regenerates exactly the
// values its insert used.
inline std::uint64_t edge_pair_id(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

inline std::uint64_t edge_pair_id(const WeightedEdge& e) { return edge_pair_id(e.u, e.v); }

struct EdgeUpdate {
  int sign = +1;  // +1 insert, -1 delete
  WeightedEdge edge;

  EdgeUpdate() = default;
  EdgeUpdate(int s, WeightedEdge e) : sign(s), edge(e) {}
};

struct StreamError : std::runtime_error {
  explicit StreamError(const std::string& what) : std::runtime_error(what) {}
};

// A parsed stream: fixed n, weighted flag, optional declared max weight, and
// one or more passes of updates. Single-pass sources have passes.size() == 1;
// multi-pass algorithms may also be driven by replaying pass 0.
struct StreamSource {
  std::uint32_t n = 0;
  bool weighted = false;
  Weight declared_max_weight = 0;  // 0 = undeclared
  std::vector<std::vector<EdgeUpdate>> passes;

  const std::vector<EdgeUpdate>& updates() const { return passes.at(0); }
  std::vector<EdgeUpdate>& updates() { return passes.at(0); }
};

struct GraphSnapshot {
  std::uint32_t n = 0;
  std::vector<WeightedEdge> edges;  // canonical, sorted, unique pairs

  std::size_t edge_count() const { return edges.size(); }

  std::vector<std::vector<std::uint32_t>> adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t i = 0; i < edges.size(); ++i) {
      adj[edges[i].u].push_back(i);
      adj[edges[i].v].push_back(i);
    }
    return adj;
  }

  std::vector<std::uint32_t> degrees() const {
    std::vector<std::uint32_t> deg(n, 0);
    for (const auto& e : edges) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }
};

// Replays one pass of updates, enforcing the stream consistency rules.
// Throws StreamError (with the 0-based update index) on violation.
inline GraphSnapshot replay(const std::vector<EdgeUpdate>& updates, std::uint32_t n) {
  std::map<std::uint64_t, Weight> live;
  for (std::size_t i = 0; i < updates.size(); ++i) {
    const EdgeUpdate& up = updates[i];
    const WeightedEdge& e = up.edge;
    if (e.u == e.v)
      throw StreamError("self-loop at update " + std::to_string(i));
    if (e.u >= n || e.v >= n)
      throw StreamError("vertex out of range at update " + std::to_string(i));
    if (e.w < 1) throw StreamError("nonpositive weight at update " + std::to_string(i));
    std::uint64_t id = edge_pair_id(e);
    auto it = live.find(id);
    if (up.sign > 0) {
      if (it != live.end())
        throw StreamError("duplicate insertion at update " + std::to_string(i));
      live.emplace(id, e.w);
    } else {
      if (it == live.end())
        throw StreamError("deletion of absent edge at update " + std::to_string(i));
      if (it->second != e.w)
        throw StreamError("deletion weight mismatch at update " + std::to_string(i));
      live.erase(it);
    }
  }
  GraphSnapshot g;
  g.n = n;
  g.edges.reserve(live.size());
  for (const auto& [id, w] : live) {
    g.edges.emplace_back(static_cast<VertexId>(id >> 32),
                         static_cast<VertexId>(id & 0xffffffffu), w);
  }
  return g;
}

inline GraphSnapshot replay(const StreamSource& s) { return replay(s.updates(), s.n); }

inline GraphSnapshot make_graph(std::uint32_t n, std::vector<WeightedEdge> edges) {
  GraphSnapshot g;
  g.n = n;
  std::sort(edges.begin(), edges.end());
  g.edges = std::move(edges);
  for (std::size_t i = 0; i + 1 < g.edges.size(); ++i) {
    if (edge_pair_id(g.edges[i]) == edge_pair_id(g.edges[i + 1]))
      throw StreamError("duplicate edge pair in snapshot");
  }
  return g;
}

inline std::vector<EdgeUpdate> insertions_of(const GraphSnapshot& g) {
  std::vector<EdgeUpdate> ups;
  ups.reserve(g.edges.size());
  for (const auto& e : g.edges) ups.emplace_back(+1, e);
  return ups;
}

}  // namespace streammatch
