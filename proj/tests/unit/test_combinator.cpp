#include "doctest.h"

#include "streammatch/black_boxes.hpp"
#include "streammatch/combinator.hpp"
#include "streammatch/generators.hpp"
#include "streammatch/rank_checks.hpp"
#include "streammatch/rank_partition.hpp"
#include "streammatch/reference.hpp"

using namespace streammatch;

namespace {

StreamSource stream_of(const GraphSnapshot& g) {
  StreamSource s;
  s.n = g.n;
  s.weighted = true;
  s.passes.push_back(insertions_of(g));
  return s;
}

}  // namespace

TEST_CASE("rank indexing and representatives") {
  CHECK(rank_of(1) == 0);
  CHECK(rank_of(7) == 2);
  CHECK(representative(2) == 4);
  CHECK(rank_of(1 << 10) == 10);
  CHECK_THROWS_AS(rank_of(0), WeightOutOfRange);
  CHECK_THROWS_AS(rank_of(9, 8), WeightOutOfRange);
}

TEST_CASE("partition verifier") {
  auto g = replay(gen_random_weighted_graph(14, 0.4, 1000, WeightLaw::kLogUniform, 5));
  auto part = power_of_two_partition(g.edges);
  CHECK(verify_partition(part, Rational(1)));

  // Two equal weights in different ranks break the strict cross-rank order.
  std::vector<RankedEdge> bad = {{{0, 1, 4}, 1, Rational(4)}, {{2, 3, 4}, 2, Rational(4)}};
  CHECK_FALSE(verify_partition(bad, Rational(1)));

  // Brute-force cross-check on random rank assignments.
  auto brute = [](const std::vector<RankedEdge>& edges, const Rational& eps) {
    Rational one(1), bound = one + eps;
    for (const auto& a : edges) {
      Rational w(a.edge.w);
      if (a.rounded * bound < w || a.rounded > w) return false;
      for (const auto& b : edges) {
        if (a.rank == b.rank && Rational(a.edge.w) > bound * Rational(b.edge.w)) return false;
        if (a.rank < b.rank && !(a.edge.w < b.edge.w)) return false;
      }
    }
    return true;
  };
  auto eng = make_engine(77);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RankedEdge> cand;
    int m = 2 + static_cast<int>(eng() % 8);
    for (int i = 0; i < m; ++i) {
      Weight w = 1 + static_cast<Weight>(eng() % 64);
      int r = static_cast<int>(eng() % 4);
      Weight wp = std::max<Weight>(1, w - static_cast<Weight>(eng() % 3));
      cand.push_back({{static_cast<VertexId>(2 * i), static_cast<VertexId>(2 * i + 1), w},
                      r,
                      Rational(wp)});
    }
    Rational eps(1 + static_cast<long long>(eng() % 3), 2);
    CHECK(verify_partition(cand, eps) == brute(cand, eps));
  }
}

TEST_CASE("combinator parameters") {
  auto p1 = CombinatorParams::for_lambda(Rational(1));
  CHECK(p1.good_ratio == Rational(6));
  CHECK(p1.significance_ratio == Rational(37, 5));  // 7.4

  auto p2 = CombinatorParams::for_lambda(Rational(2));
  CHECK(p2.good_ratio == Rational(28));
  CHECK(p2.significance_ratio == Rational(106, 5));  // 21.2

  // The significance constant equalizes the two charging regimes:
  // 5 lambda c = 2 lambda T + 25 lambda^2 = 2 lambda T / (1 - 5 lambda / c).
  for (Rational lambda : {Rational(1), Rational(3, 2), Rational(2), Rational(4)}) {
    auto p = CombinatorParams::for_lambda(lambda);
    Rational lhs = Rational(5) * lambda * p.significance_ratio;
    Rational rhs = Rational(2) * lambda * p.good_ratio + Rational(25) * lambda * lambda;
    CHECK(lhs == rhs);
    Rational geom = Rational(2) * lambda * p.good_ratio /
                    (Rational(1) - Rational(5) * lambda / p.significance_ratio);
    CHECK(geom == rhs);
    CHECK(p.significance_ratio > Rational(5) * lambda);
  }
}

TEST_CASE("reference decomposition fixtures") {
  // Single rank: a maximal matching, at least half of maximum.
  auto g = replay(gen_random_weighted_graph(12, 0.5, 1, WeightLaw::kUniform, 31));
  auto dec = reference_decomposition(g, 7);
  CHECK(dec.top_rank == 0);
  long long nu = exact_max_matching(g).size;
  CHECK(2 * dec.layer_sizes[0] >= nu);

  // Two vertex-disjoint edges in ranks 0 and 1: S_0 = 2, S_1 = 1.
  auto two = make_graph(4, {{0, 1, 1}, {2, 3, 2}});
  auto d2 = reference_decomposition(two, 7);
  CHECK(d2.top_rank == 1);
  CHECK(d2.suffix_sizes[0] == 2);
  CHECK(d2.suffix_sizes[1] == 1);

  CHECK(reference_decomposition(make_graph(4, {}), 7).top_rank == -1);
}

TEST_CASE("reference value sits in [w*/8, w*]") {
  for (int trial = 0; trial < 60; ++trial) {
    auto g = replay(gen_random_weighted_graph(4 + trial % 15, 0.5, 1024,
                                              trial % 2 ? WeightLaw::kLogUniform
                                                        : WeightLaw::kUniform,
                                              4400 + trial));
    auto dec = reference_decomposition(g, derive(1, trial));
    long long wstar = exact_max_weight_matching(g).weight;
    Rational v = dec.rounded_value();
    CHECK(Rational(8) * v >= Rational(wstar));
    CHECK(v <= Rational(wstar));
  }
}

TEST_CASE("combinator on a single-rank stream returns 0.4 nu") {
  auto g = replay(gen_random_weighted_graph(16, 0.4, 1, WeightLaw::kUniform, 99));
  long long nu = exact_max_matching(g).size;
  auto rep = run_combinator(stream_of(g), make_black_box("exact"), 17);
  CHECK(rep.top_rank == 0);
  CHECK(rep.estimate == Rational(2, 5) * Rational(nu));
}

TEST_CASE("a tiny low rank is suppressed by the good test") {
  // Rank 3 holds a big matching, rank 0 a single extra edge; with T = 6 the
  // lower suffix estimate cannot beat the top by a factor > 6.
  std::vector<WeightedEdge> edges;
  std::uint32_t v = 0;
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(v, v + 1, 8);
    v += 2;
  }
  edges.emplace_back(v, v + 1, 1);
  auto g = make_graph(v + 2, edges);
  auto rep = run_combinator(stream_of(g), make_black_box("exact"), 3);
  REQUIRE(rep.top_rank == 3);
  CHECK(rep.contributions[0].is_zero());
  CHECK(rep.kept_estimates[0].is_zero());  // 6 <= 6 * 5 fails the strict test
  CHECK(rep.estimate == Rational(2, 5) * Rational(8) * Rational(5));
  CHECK(rep.good_ranks == std::vector<int>{3});
  CHECK(rep.significant_ranks == std::vector<int>{3});
}

TEST_CASE("empty stream yields an empty report") {
  StreamSource s;
  s.n = 8;
  s.weighted = true;
  s.passes.emplace_back();
  auto rep = run_combinator(s, make_black_box("exact"), 1);
  CHECK(rep.top_rank == -1);
  CHECK(rep.estimate.is_zero());
  CHECK(rep.good_ranks.empty());
}

TEST_CASE("combinator is deterministic bit for bit") {
  auto s = gen_random_weighted_graph(18, 0.3, 512, WeightLaw::kLogUniform, 2222);
  auto churned = shuffle_with_deletions(s, 0.3, 5);
  auto a = run_combinator(churned, make_black_box("greedy"), 42);
  auto b = run_combinator(churned, make_black_box("greedy"), 42);
  CHECK(a.to_json().dump() == b.to_json().dump());
  auto c = run_combinator(churned, make_black_box("greedy"), 43);
  CHECK(a.estimate.to_double() == doctest::Approx(c.estimate.to_double()).epsilon(1.0));
}

TEST_CASE("combinator with the exact box stays within its proof-chain bounds") {
  // lambda = 1: T = 6, c = 7.4; estimate in [w*/1520, w*].
  for (int trial = 0; trial < 40; ++trial) {
    auto base = gen_random_weighted_graph(6 + trial % 15, 0.45, 1024,
                                          trial % 2 ? WeightLaw::kLogUniform
                                                    : WeightLaw::kUniform,
                                          7000 + trial);
    auto s = shuffle_with_deletions(base, 0.25, trial);
    auto rep = run_combinator(s, make_black_box("exact"), derive(2, trial));
    long long wstar = exact_max_weight_matching(replay(s)).weight;
    if (wstar == 0) {
      CHECK(rep.estimate.is_zero());
      continue;
    }
    CHECK(rep.estimate <= Rational(wstar));
    CHECK(Rational(1520) * rep.estimate >= Rational(wstar));
  }
}

TEST_CASE("estimate identity is recomputable from the report") {
  auto s = gen_random_weighted_graph(20, 0.35, 900, WeightLaw::kLogUniform, 31);
  auto rep = run_combinator(s, make_black_box("exact"), 8);
  Rational sum;
  for (int i = 0; i <= rep.top_rank; ++i)
    sum += Rational(representative(i)) * rep.contributions[i];
  CHECK(rep.estimate == Rational(2, 5) * sum);
  // Nonzero pattern matches the index lists.
  for (int i = 0; i <= rep.top_rank; ++i) {
    bool in_good = std::find(rep.good_ranks.begin(), rep.good_ranks.end(), i) !=
                   rep.good_ranks.end();
    CHECK(in_good == !rep.kept_estimates[i].is_zero());
    bool in_sig = std::find(rep.significant_ranks.begin(), rep.significant_ranks.end(), i) !=
                  rep.significant_ranks.end();
    CHECK(in_sig == !rep.contributions[i].is_zero());
  }
}

TEST_CASE("rank structure checks pass for honest boxes") {
  int contract_violations = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto s = shuffle_with_deletions(
        gen_random_weighted_graph(8 + trial % 14, 0.4, 1000,
                                  trial % 2 ? WeightLaw::kLogUniform : WeightLaw::kUniform,
                                  8800 + trial),
        0.2, trial);
    std::uint64_t seed = derive(3, trial);
    auto g = replay(s);

    for (const char* kind : {"exact", "greedy"}) {
      auto handle = make_black_box(kind);
      auto rep = run_combinator(s, handle, seed);
      if (rep.top_rank < 0) continue;
      auto dec = reference_decomposition(g, seed);
      // greedy/exact honor their contracts deterministically; verify anyway
      bool contract_ok = true;
      for (int i = 0; i <= rep.top_rank; ++i) {
        GraphSnapshot suffix;
        suffix.n = g.n;
        for (const auto& e : g.edges)
          if (rank_of(e.w) >= i) suffix.edges.push_back(e);
        long long nu = exact_max_matching(suffix).size;
        if (handle.lambda * rep.raw_estimates[i] < Rational(nu) ||
            rep.raw_estimates[i] > Rational(nu))
          contract_ok = false;
      }
      if (!contract_ok) {
        ++contract_violations;
        continue;
      }
      auto checks = check_rank_structure(rep, dec, handle.lambda);
      for (const auto& a : checks) {
        CAPTURE(trial);
        CAPTURE(kind);
        CAPTURE(a.name);
        CHECK(a.ok);
      }
    }
  }
  CHECK(contract_violations == 0);
}

TEST_CASE("arboricity black box inside the combinator") {
  // Fully streaming weighted pipeline: sketch-backed unweighted estimator
  // under the rank combinator, on a weighted bounded-arboricity stream.
  auto base = gen_bounded_arboricity(300, 2, 64);
  auto s = gen_weighted(base, 64, WeightLaw::kLogUniform, 64);
  auto handle = make_black_box("arboricity", {.alpha = 2.0, .eps = Rational(2, 5)});
  auto rep = run_combinator(s, handle, 19);
  REQUIRE(rep.top_rank >= 1);
  CHECK(rep.estimate >= Rational(0));
  CHECK(rep.failure_budget == doctest::Approx(0.30 * (rep.top_rank + 1)));
  auto rep2 = run_combinator(s, handle, 19);
  CHECK(rep.to_json().dump() == rep2.to_json().dump());
  // At this size the box samples every vertex, so its one-sided contract
  // (estimate <= suffix matching size) holds on every rank.
  auto g = replay(s);
  for (int r = 0; r <= rep.top_rank; ++r) {
    GraphSnapshot suffix;
    suffix.n = g.n;
    for (const auto& e : g.edges)
      if (rank_of(e.w) >= r) suffix.edges.push_back(e);
    long long nu = exact_max_matching(suffix).size;
    CHECK(rep.raw_estimates[r] <= Rational(nu));
  }
}

TEST_CASE("tutte black box inside the combinator") {
  // nu = 3 single-rank graph: doubling readout 8, estimate R/4 = 2.
  auto g = make_graph(8, {{0, 1, 1}, {2, 3, 1}, {4, 5, 1}});
  auto handle = make_black_box("tutte");
  auto rep = run_combinator(stream_of(g), handle, 5);
  REQUIRE(rep.top_rank == 0);
  CHECK(rep.raw_estimates[0] == Rational(2));
  long long nu = 3;
  CHECK(rep.raw_estimates[0] <= Rational(nu));
  CHECK(Rational(4) * rep.raw_estimates[0] >= Rational(nu));
}
