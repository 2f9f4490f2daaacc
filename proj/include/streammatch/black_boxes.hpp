#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "streammatch/arboricity_estimator.hpp"
#include "streammatch/combinator.hpp"
#include "streammatch/core.hpp"
#include "streammatch/matching.hpp"
#include "streammatch/tutte_sketch.hpp"

// Built-in unweighted black boxes for the weighted combinator.
//
//   exact   lambda = 1   buffers the substream, answers with the blossom
//                        oracle; verification only.
//   greedy  lambda = 2   buffers, answers with a seeded maximal matching;
//                        verification only (a maximal matching is always
//                        within [nu/2, nu]).
//   tutte   lambda = 4   true dynamic-stream sketch: doubling rank readout
//                        R, answer R/4, so answer <= nu <= 4 * answer.
//   arboricity          one-pass bounded-arboricity estimator; lambda
//                        follows its composed guarantee.

namespace streammatch {

namespace detail {

class BufferingBox : public UnweightedMatchingEstimator {
 public:
  explicit BufferingBox(std::uint32_t n) : n_(n) {}

  void update(const EdgeUpdate& up) override {
    std::uint64_t id = edge_pair_id(up.edge);
    if (up.sign > 0) {
      live_[id] = up.edge.w;
    } else {
      live_.erase(id);
    }
  }

  long long size_words() const override { return static_cast<long long>(live_.size()); }

 protected:
  GraphSnapshot snapshot() const {
    std::vector<WeightedEdge> edges;
    edges.reserve(live_.size());
    for (const auto& [id, w] : live_)
      edges.emplace_back(static_cast<VertexId>(id >> 32),
                         static_cast<VertexId>(id & 0xffffffffu), w);
    return make_graph(n_, std::move(edges));
  }

  std::uint32_t n_;
  std::map<std::uint64_t, Weight> live_;
};

class ExactBox final : public BufferingBox {
 public:
  using BufferingBox::BufferingBox;
  Rational estimate() override { return Rational(exact_max_matching(snapshot()).size); }
};

class GreedyBox final : public BufferingBox {
 public:
  GreedyBox(std::uint32_t n, std::uint64_t seed) : BufferingBox(n), seed_(seed) {}
  Rational estimate() override {
    return Rational(static_cast<long long>(greedy_maximal_matching(snapshot(), seed_).size()));
  }

 private:
  std::uint64_t seed_;
};

class TutteDoublingBox final : public UnweightedMatchingEstimator {
 public:
  TutteDoublingBox(std::uint32_t n, std::uint64_t seed)
      : est_(n, next_pow2(n), seed) {}

  void update(const EdgeUpdate& up) override { est_.update(up); }
  Rational estimate() override { return Rational(est_.readout(), 4); }
  long long size_words() const override { return est_.size_words(); }

  static std::uint32_t next_pow2(std::uint32_t n) {
    std::uint32_t k = 1;
    while (k < n) k *= 2;
    return std::max<std::uint32_t>(2, k);
  }

 private:
  DoublingRankEstimator est_;
};

class ArboricityBox final : public UnweightedMatchingEstimator {
 public:
  ArboricityBox(std::uint32_t n, const ArboricityConfig& cfg) : est_(n, cfg) {}

  void update(const EdgeUpdate& up) override { est_.update(up); }
  void end_of_pass() override { est_.end_of_pass(); }
  Rational estimate() override { return est_.finalize().exact; }
  long long size_words() const override { return est_.size_words(); }

 private:
  ArboricityMatchingEstimator est_;
};

}  // namespace detail

struct BlackBoxOptions {
  double alpha = 1.0;           // arboricity bound (arboricity box)
  Rational eps = Rational(1, 2);  // accuracy knob (arboricity box)
};

inline UnweightedEstimatorHandle make_black_box(const std::string& kind,
                                                const BlackBoxOptions& opts = {}) {
  UnweightedEstimatorHandle h;
  h.name = kind;
  if (kind == "exact") {
    h.lambda = Rational(1);
    h.delta = 0.0;
    h.make = [](std::uint32_t n, std::uint64_t) {
      return std::make_unique<detail::ExactBox>(n);
    };
  } else if (kind == "greedy") {
    h.lambda = Rational(2);
    h.delta = 0.0;
    h.make = [](std::uint32_t n, std::uint64_t seed) {
      return std::make_unique<detail::GreedyBox>(n, seed);
    };
  } else if (kind == "tutte") {
    h.lambda = Rational(4);
    h.delta = 1e-9;  // Schwartz-Zippel over all doubling decisions
    h.make = [](std::uint32_t n, std::uint64_t seed) {
      return std::make_unique<detail::TutteDoublingBox>(n, seed);
    };
  } else if (kind == "arboricity") {
    ArboricityConfig cfg;
    cfg.alpha = opts.alpha;
    cfg.eps = opts.eps;
    cfg.passes = 1;
    long long I = static_cast<long long>(std::ceil(2.0 * opts.alpha + 3.0));
    h.lambda = Rational(2) * (Rational(1) + opts.eps) * composed_slack(I) /
               (Rational(1) - opts.eps);
    h.delta = 0.30;  // one-pass shallow succeeds with constant probability
    h.make = [cfg](std::uint32_t n, std::uint64_t seed) {
      ArboricityConfig c = cfg;
      c.seed = seed;
      return std::make_unique<detail::ArboricityBox>(n, c);
    };
  } else {
    throw std::invalid_argument("unknown black box: " + kind);
  }
  return h;
}

}  // namespace streammatch
