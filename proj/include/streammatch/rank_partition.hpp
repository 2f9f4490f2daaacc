#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "streammatch/core.hpp"
#include "streammatch/rational.hpp"

// Weight ranks: an edge of weight w lands in rank floor(log2 w), i.e. rank i
// holds weights in [2^i, 2^(i+1)), and the rank's representative weight is
// 2^i. Rounding a weight down to its representative loses at most a factor
// of two, which is the eps = 1 instance of the partition-quality conditions
// checked by verify_partition.

namespace streammatch {

struct WeightOutOfRange : std::runtime_error {
  explicit WeightOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

inline int rank_of(Weight w, Weight max_weight = 0) {
  if (w < 1) throw WeightOutOfRange("edge weight must be >= 1");
  if (max_weight > 0 && w > max_weight)
    throw WeightOutOfRange("edge weight exceeds the declared maximum");
  return std::bit_width(static_cast<std::uint64_t>(w)) - 1;
}

inline Weight representative(int rank) {
  if (rank < 0 || rank > 62) throw WeightOutOfRange("rank out of range");
  return static_cast<Weight>(1) << rank;
}

struct RankedEdge {
  WeightedEdge edge;
  int rank = 0;
  Rational rounded;  // w'(e)
};

inline std::vector<RankedEdge> power_of_two_partition(const std::vector<WeightedEdge>& edges) {
  std::vector<RankedEdge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    int r = rank_of(e.w);
    out.push_back({e, r, Rational(representative(r))});
  }
  return out;
}

// Checks the three partition-quality conditions:
//   (1) 1/(1+eps) <= w'(e)/w(e) <= 1 for every edge,
//   (2) w(e1)/w(e2) <= 1+eps within a rank,
//   (3) w(e) < w(e') strictly across ranks i < j.
// Runs on per-rank weight extremes, so it is linear in the edge count.
inline bool verify_partition(const std::vector<RankedEdge>& edges, const Rational& eps) {
  Rational one(1), bound = one + eps;
  std::map<int, std::pair<Weight, Weight>> extremes;  // rank -> (min w, max w)
  for (const auto& re : edges) {
    Rational w(re.edge.w);
    if (re.rounded * bound < w) return false;  // w'/w < 1/(1+eps)
    if (re.rounded > w) return false;          // w' > w
    auto it = extremes.find(re.rank);
    if (it == extremes.end()) {
      extremes.emplace(re.rank, std::make_pair(re.edge.w, re.edge.w));
    } else {
      it->second.first = std::min(it->second.first, re.edge.w);
      it->second.second = std::max(it->second.second, re.edge.w);
    }
  }
  const std::pair<const int, std::pair<Weight, Weight>>* prev = nullptr;
  for (const auto& kv : extremes) {
    const auto& [mn, mx] = kv.second;
    if (Rational(mx) > bound * Rational(mn)) return false;  // within-rank spread
    if (prev && !(prev->second.second < mn)) return false;  // cross-rank order
    prev = &kv;
  }
  return true;
}

}  // namespace streammatch
