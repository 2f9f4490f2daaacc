#include "doctest.h"

#include "streammatch/arboricity_estimator.hpp"
#include "streammatch/generators.hpp"
#include "streammatch/graph_stats.hpp"
#include "streammatch/heavy_shallow.hpp"
#include "streammatch/matching.hpp"
#include "streammatch/small_matching.hpp"
#include "streammatch/tree_estimator.hpp"

using namespace streammatch;

namespace {

void feed(auto& est, const StreamSource& s) {
  for (const auto& up : s.updates()) est.update(up);
}

StreamSource stream_of(const GraphSnapshot& g) {
  StreamSource s;
  s.n = g.n;
  s.passes.push_back(insertions_of(g));
  return s;
}

}  // namespace

TEST_CASE("tree estimator sandwich on fixtures") {
  const double eps = 0.1;
  double factor = TreeMatchingEstimator::guarantee_factor(eps);

  // Star K_{1,5}: one internal node, matching 1.
  std::vector<WeightedEdge> star;
  for (std::uint32_t i = 1; i <= 5; ++i) star.emplace_back(0, i);
  TreeMatchingEstimator e1(6, eps, 0.05, 11);
  feed(e1, stream_of(make_graph(6, star)));
  CHECK(e1.estimate() <= 1.0 + 1e-9);
  CHECK(1.0 <= factor * e1.estimate() + 1e-9);

  // Path on 5 vertices: 3 internal nodes, matching 2.
  auto p5 = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  TreeMatchingEstimator e2(5, eps, 0.05, 12);
  feed(e2, stream_of(p5));
  CHECK(e2.estimate() <= 2.0 + 1e-9);
  CHECK(2.0 <= factor * e2.estimate() + 1e-9);
}

TEST_CASE("tree estimator hits its factor on random trees") {
  const double eps = 0.1;
  double factor = TreeMatchingEstimator::guarantee_factor(eps);
  int ok = 0;
  const int kTrials = 20;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::uint32_t n = 2000;
    auto s = gen_random_tree(n, 9100 + trial);
    auto churned = shuffle_with_deletions(s, 0.25, trial);
    TreeMatchingEstimator est(n, eps, 0.05, derive(31, trial));
    feed(est, churned);
    long long nu = exact_max_matching(replay(churned)).size;
    double e = est.estimate();
    if (e <= nu && nu <= factor * e) ++ok;
  }
  CHECK(ok >= kTrials - 1);
}

TEST_CASE("heavy estimator: trivial and planted regimes") {
  // Max degree <= C: estimate is exactly zero.
  auto p4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  HeavyEstimator none(4, 5, 2, 0.5, 3);
  feed(none, stream_of(p4));
  CHECK(none.finalize().exact.is_zero());

  // Planted heavy instances: 2T centers of degree 6 with C = 5.
  const long long T = 200, C = 5;
  const double eps = 0.5;
  std::uint32_t n = 2800;
  int ok_acc = 0, ok_below = 0;
  const int kTrials = 60;
  for (int trial = 0; trial < kTrials; ++trial) {
    for (long long centers : {2 * T, T / 4}) {
      std::vector<WeightedEdge> edges;
      std::uint32_t next = static_cast<std::uint32_t>(centers);
      for (std::uint32_t ctr = 0; ctr < centers; ++ctr)
        for (int leaf = 0; leaf < 6; ++leaf) edges.emplace_back(ctr, next++);
      auto g = make_graph(n, edges);
      HeavyEstimator est(n, C, T, eps, derive(5100, trial, centers));
      feed(est, stream_of(g));
      auto r = est.finalize();
      CHECK(est.sample_size() < n);  // otherwise the trial is vacuous
      if (centers == 2 * T) {
        if (r.exact >= Rational((1 - eps) * 2 * T) && r.exact <= Rational((1 + eps) * 2 * T))
          ++ok_acc;
      } else {
        if (r.exact < Rational(3 * T)) ++ok_below;
      }
    }
  }
  CHECK(ok_acc >= kTrials * 9 / 10);
  CHECK(ok_below >= kTrials * 9 / 10);
}

TEST_CASE("two-pass shallow estimator on planted instances") {
  const long long T = 100, C = 5;
  const double eps = 0.5;
  std::uint32_t n = 800;
  int ok = 0;
  const int kTrials = 40;
  for (int trial = 0; trial < kTrials; ++trial) {
    // 2T disjoint shallow edges + 40 heavy stars.
    std::vector<WeightedEdge> edges;
    std::uint32_t next = 0;
    for (int i = 0; i < 2 * T; ++i) {
      edges.emplace_back(next, next + 1);
      next += 2;
    }
    std::uint32_t stars = 40;
    for (std::uint32_t ctr = 0; ctr < stars; ++ctr) {
      std::uint32_t hub = next++;
      for (int leaf = 0; leaf < 6; ++leaf) edges.emplace_back(hub, next++);
    }
    REQUIRE(next <= n);
    auto g = make_graph(n, edges);
    long long truth = heavy_shallow_ground_truth(g, C).shallow;
    REQUIRE(truth == 2 * T);

    ShallowTwoPassEstimator est(n, C, T, eps, 1.0, derive(5200, trial));
    auto s = stream_of(g);
    feed(est, s);
    est.end_of_pass();
    feed(est, s);
    auto r = est.finalize();
    CHECK(est.exact_edge_count() == static_cast<long long>(g.edges.size()));
    if (r.exact >= Rational((1 - eps) * truth) && r.exact <= Rational((1 + eps) * truth)) ++ok;
  }
  CHECK(ok >= kTrials * 9 / 10);
}

TEST_CASE("one-pass shallow estimator: degenerate full sample is exact") {
  // With S = V the pair probability is 1 and the recovered count is s_G.
  std::uint32_t n = 40;
  auto g = replay(gen_bounded_arboricity(n, 2, 99));
  long long C = 5;
  ShallowOnePassEstimator est(n, C, 1, 0.5, 2.0, 17);
  REQUIRE(est.sample_size() == n);
  feed(est, stream_of(g));
  auto r = est.finalize();
  CHECK(r.exact == Rational(heavy_shallow_ground_truth(g, C).shallow));

  ShallowOnePassEstimator empty(16, 3, 4, 0.5, 1.0, 18);
  CHECK(empty.finalize().exact.is_zero());
}

TEST_CASE("one-pass shallow estimator on planted instances") {
  const long long T = 100, C = 5;
  const double eps = 0.5;
  std::uint32_t n = 800;
  int ok = 0;
  const int kTrials = 40;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<WeightedEdge> edges;
    std::uint32_t next = 0;
    for (int i = 0; i < 2 * T; ++i) {
      edges.emplace_back(next, next + 1);
      next += 2;
    }
    for (std::uint32_t ctr = 0; ctr < 40; ++ctr) {
      std::uint32_t hub = next++;
      for (int leaf = 0; leaf < 6; ++leaf) edges.emplace_back(hub, next++);
    }
    auto g = make_graph(n, edges);
    ShallowOnePassEstimator est(n, C, T, eps, 1.0, derive(5300, trial));
    CHECK(est.sample_size() < n);
    feed(est, stream_of(g));
    auto r = est.finalize();
    long long truth = 2 * T;
    if (r.exact >= Rational((1 - eps) * truth) && r.exact <= Rational((1 + eps) * truth)) ++ok;
  }
  CHECK(ok >= kTrials * 7 / 10);
}

TEST_CASE("composed estimator takes the doubling branch on small matchings") {
  // nu = 2 on a large vertex set: gate stays closed, doubling answers.
  std::uint32_t n = 512;
  auto g = make_graph(n, {{0, 1}, {2, 3}});
  ArboricityConfig cfg;
  cfg.alpha = 1.0;
  cfg.eps = Rational(3, 10);
  cfg.seed = 4;
  ArboricityMatchingEstimator est(n, cfg);
  feed(est, stream_of(g));
  auto r = est.finalize();
  CHECK(r.branch == ArboricityEstimate::Branch::kRankDoubling);
  CHECK(r.exact <= Rational(2));
  CHECK(Rational(2) <= Rational(2) * r.exact);
}

TEST_CASE("composed estimator sandwich on bounded-arboricity graphs") {
  int ok = 0;
  const int kTrials = 12;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::uint32_t n = 1000;
    std::uint32_t nu_bound = 3;
    auto s = shuffle_with_deletions(gen_bounded_arboricity(n, nu_bound, 880 + trial), 0.2,
                                    trial);
    ArboricityConfig cfg;
    cfg.alpha = nu_bound;
    cfg.eps = Rational(3, 10);
    cfg.seed = derive(6100, trial);
    ArboricityMatchingEstimator est(n, cfg);
    feed(est, s);
    ArboricityEstimate r;
    try {
      r = est.finalize();
    } catch (const RecoveryFailure&) {
      continue;
    }
    long long nu = exact_max_matching(replay(s)).size;
    Rational factor = Rational(2) * (Rational(1) + cfg.eps) * Rational(5 * 3 + 9) /
                      (Rational(1) - cfg.eps);
    if (r.exact <= Rational(nu) && Rational(nu) <= factor * r.exact) ++ok;
  }
  CHECK(ok >= kTrials * 8 / 10);
}

TEST_CASE("count sandwich: max(h,s)/slack <= nu <= h + s") {
  for (int trial = 0; trial < 30; ++trial) {
    std::uint32_t n = 100 + 60 * (trial % 5);
    long long alpha = 1 + trial % 3;
    auto g = replay(gen_bounded_arboricity(n, static_cast<std::uint32_t>(alpha), 700 + trial));
    long long C = 2 * alpha + 3;
    auto hs = heavy_shallow_ground_truth(g, C);
    long long nu = exact_max_matching(g).size;
    Rational eta = sandwich_slack(C);
    CHECK(Rational(std::max(hs.heavy, hs.shallow)) <= eta * Rational(nu));
    CHECK(nu <= hs.heavy + hs.shallow);
  }
  CHECK(sandwich_slack(5) == Rational(7));           // alpha = 1
  CHECK(composed_slack(5) == Rational(73, 4));       // alpha = 1: 18.25
}

TEST_CASE("small matching maintainer") {
  SUBCASE("a perfect matching instance is eventually returned in full") {
    std::uint32_t n = 64;
    std::vector<WeightedEdge> pm;
    for (std::uint32_t i = 0; i < n / 2; ++i) pm.emplace_back(2 * i, 2 * i + 1);
    auto g = make_graph(n, pm);
    SmallMatchingMaintainer m(n, static_cast<long long>(pm.size()), 0.5, 1.0, 21);
    auto s = stream_of(g);
    feed(m, s);
    m.end_of_pass();
    feed(m, s);
    auto got = m.finalize();
    CHECK(static_cast<long long>(got.size()) == m.target());
    CHECK(is_valid_matching(g, got));
  }

  SUBCASE("empty stream gives an empty matching") {
    SmallMatchingMaintainer m(32, 8, 0.5, 1.0, 22);
    m.end_of_pass();
    CHECK(m.finalize().empty());
  }

  SUBCASE("random graphs: result is a matching, large or maximal") {
    for (int trial = 0; trial < 25; ++trial) {
      std::uint32_t n = 60;
      auto s = gen_bounded_arboricity(n, 2, 2300 + trial);
      auto g = replay(s);
      SmallMatchingMaintainer m(n, static_cast<long long>(g.edges.size()), 0.4, 1.2,
                                derive(23, trial));
      feed(m, s);
      m.end_of_pass();
      feed(m, s);
      std::vector<WeightedEdge> got;
      try {
        got = m.finalize();
      } catch (const RecoveryFailure&) {
        continue;
      }
      CHECK(is_valid_matching(g, got));
      if (static_cast<long long>(got.size()) < m.target()) {
        // must be maximal in the final graph
        std::vector<bool> used(g.n, false);
        for (const auto& e : got) used[e.u] = used[e.v] = true;
        for (const auto& e : g.edges) CHECK((used[e.u] || used[e.v]));
      }
    }
  }
}
