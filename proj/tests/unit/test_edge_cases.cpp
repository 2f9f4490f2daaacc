#include "doctest.h"

#include "streammatch/black_boxes.hpp"
#include "streammatch/generators.hpp"
#include "streammatch/graph_stats.hpp"
#include "streammatch/heavy_shallow.hpp"
#include "streammatch/matching.hpp"
#include "streammatch/rank_checks.hpp"
#include "streammatch/tutte_sketch.hpp"

using namespace streammatch;

namespace {

StreamSource stream_of(const GraphSnapshot& g, bool weighted = false) {
  StreamSource s;
  s.n = g.n;
  s.weighted = weighted;
  s.passes.push_back(insertions_of(g));
  return s;
}

}  // namespace

TEST_CASE("two-pass shallow: all-shallow and no-shallow extremes") {
  const long long C = 5, T = 10;

  SUBCASE("every edge shallow gives exactly the edge count") {
    // 60 disjoint edges, all endpoints degree 1.
    std::vector<WeightedEdge> edges;
    for (std::uint32_t i = 0; i < 60; ++i) edges.emplace_back(2 * i, 2 * i + 1);
    auto g = make_graph(128, edges);
    ShallowTwoPassEstimator est(128, C, T, 0.5, 1.0, 77);
    for (const auto& up : insertions_of(g)) est.update(up);
    auto sub = est.end_of_pass();
    CHECK_FALSE(sub.empty());
    for (const auto& up : insertions_of(g)) est.update(up);
    CHECK(est.finalize().exact == Rational(60));
  }

  SUBCASE("no shallow edges gives zero") {
    // One big star: every edge touches the heavy hub.
    std::vector<WeightedEdge> edges;
    for (std::uint32_t i = 1; i <= 40; ++i) edges.emplace_back(0, i);
    auto g = make_graph(64, edges);
    ShallowTwoPassEstimator est(64, C, T, 0.5, 1.0, 78);
    for (const auto& up : insertions_of(g)) est.update(up);
    est.end_of_pass();
    for (const auto& up : insertions_of(g)) est.update(up);
    CHECK(est.finalize().exact.is_zero());
  }
}

TEST_CASE("count sandwich holds up to n = 2000") {
  for (std::uint32_t n : {500u, 1200u, 2000u}) {
    for (int trial = 0; trial < 3; ++trial) {
      long long alpha = 1 + trial;
      auto g = replay(gen_bounded_arboricity(n, static_cast<std::uint32_t>(alpha),
                                             derive(n, trial)));
      long long C = 2 * alpha + 3;
      auto hs = heavy_shallow_ground_truth(g, C);
      long long nu = exact_max_matching(g).size;
      CHECK(Rational(std::max(hs.heavy, hs.shallow)) <= sandwich_slack(C) * Rational(nu));
      CHECK(nu <= hs.heavy + hs.shallow);
    }
  }
}

TEST_CASE("black box fixtures") {
  auto k3 = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});

  SUBCASE("exact box on a triangle") {
    auto box = make_black_box("exact").make(3, 1);
    for (const auto& up : insertions_of(k3)) box->update(up);
    CHECK(box->estimate() == Rational(1));
  }

  SUBCASE("greedy box on a path is 1 or 2, always within [nu/2, nu]") {
    auto p4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto box = make_black_box("greedy").make(4, seed);
      for (const auto& up : insertions_of(p4)) box->update(up);
      Rational est = box->estimate();
      CHECK((est == Rational(1) || est == Rational(2)));
    }
  }

  SUBCASE("tutte box answers R/4 with nu <= 4 * answer") {
    auto g = make_graph(8, {{0, 1}, {2, 3}, {4, 5}});  // nu = 3
    auto box = make_black_box("tutte").make(8, 55);
    for (const auto& up : insertions_of(g)) box->update(up);
    Rational est = box->estimate();
    CHECK(est == Rational(2));  // doubling readout 8
    CHECK(est <= Rational(3));
    CHECK(Rational(4) * est >= Rational(3));
  }

  SUBCASE("arboricity box declares a usable contract") {
    auto handle = make_black_box("arboricity", {.alpha = 1.0, .eps = Rational(3, 10)});
    CHECK(handle.lambda > Rational(1));
    auto g = replay(gen_bounded_arboricity(400, 1, 9));
    auto box = handle.make(400, 77);
    for (const auto& up : insertions_of(g)) box->update(up);
    Rational est = box->estimate();
    long long nu = exact_max_matching(g).size;
    CHECK(est <= Rational(nu));
    CHECK(handle.lambda * est >= Rational(nu));
  }
}

TEST_CASE("single-rank run: anchors, block, and bracket") {
  auto g = replay(gen_random_weighted_graph(14, 0.5, 1, WeightLaw::kUniform, 404));
  std::uint64_t seed = 31;
  auto handle = make_black_box("exact");
  auto rep = run_combinator(stream_of(g, true), handle, seed);
  REQUIRE(rep.top_rank == 0);
  CHECK(rep.good_ranks == std::vector<int>{0});
  CHECK(rep.significant_ranks == std::vector<int>{0});
  auto dec = reference_decomposition(g, seed);
  // contribution brackets the top layer: D_1 = |M_t|
  const Rational& r = rep.contributions[0];
  Rational d1(dec.layer_sizes[0]);
  CHECK(Rational(2) * handle.lambda * r >= d1);
  CHECK(Rational(2) * r <= Rational(5) * d1);
  CHECK(all_pass(check_rank_structure(rep, dec, handle.lambda)));
}

TEST_CASE("tutte sketch word count is O(k^2) by counter") {
  for (std::uint32_t k : {1u, 4u, 16u, 32u}) {
    TutteRankSketch sk(64, k, 5);
    CHECK(sk.size_words() <= 2LL * (k + 1) * (k + 1) + 16);
    CHECK(sk.size_words() >= static_cast<long long>(k + 1) * (k + 1));
  }
}
