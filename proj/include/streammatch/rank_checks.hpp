#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "streammatch/combinator.hpp"
#include "streammatch/rational.hpp"
#include "streammatch/reference.hpp"

// Verification hooks: every quantified inequality the combinator's analysis
// promises, evaluated against a concrete run (the report) and the offline
// reference decomposition of the same final graph. All checks assume the
// black box honored its per-rank contract on this run; callers verify that
// separately when the box is randomized.

namespace streammatch {

struct RankAssertion {
  std::string name;
  bool ok = true;
  std::string detail;
};

namespace detail {

inline void expect(std::vector<RankAssertion>& out, const std::string& name, bool ok,
                   const std::string& detail_on_fail = "") {
  out.push_back({name, ok, ok ? "" : detail_on_fail});
}

// Block sums between consecutive significant ranks: blocks[0] is the top
// layer alone; blocks[l] for l >= 1 sums the layers from the (l+1)-th
// significant rank up to but excluding the l-th.
inline std::vector<long long> block_sums(const RankReport& rep, const RankDecomposition& dec) {
  const auto& sig = rep.significant_ranks;
  std::vector<long long> blocks;
  if (sig.empty()) return blocks;
  blocks.push_back(dec.layer_sizes[sig[0]]);
  for (std::size_t l = 1; l < sig.size(); ++l) {
    long long sum = 0;
    for (int i = sig[l]; i <= sig[l - 1] - 1; ++i) sum += dec.layer_sizes[i];
    blocks.push_back(sum);
  }
  return blocks;
}

}  // namespace detail

inline std::vector<RankAssertion> check_rank_structure(const RankReport& rep,
                                                       const RankDecomposition& dec,
                                                       const Rational& lambda) {
  std::vector<RankAssertion> out;
  const Rational& T = rep.params.good_ratio;
  const Rational& c = rep.params.significance_ratio;
  const int t = rep.top_rank;
  if (t < 0 || dec.top_rank != t) {
    detail::expect(out, "report/decomposition alignment", t >= 0 && dec.top_rank == t,
                   "top ranks differ");
    return out;
  }
  const auto& good = rep.good_ranks;
  const auto& sig = rep.significant_ranks;

  // Structure: t anchors both lists, significant is a subset of good, both
  // strictly descending.
  bool anchored = !good.empty() && !sig.empty() && good[0] == t && sig[0] == t;
  detail::expect(out, "top rank anchors both lists", anchored);
  bool subset = true;
  for (int s : sig)
    if (std::find(good.begin(), good.end(), s) == good.end()) subset = false;
  detail::expect(out, "significant subset of good", subset);
  bool descending = true;
  for (std::size_t i = 1; i < good.size(); ++i)
    if (good[i] >= good[i - 1]) descending = false;
  for (std::size_t i = 1; i < sig.size(); ++i)
    if (sig[i] >= sig[i - 1]) descending = false;
  detail::expect(out, "lists strictly descending", descending);

  // Each good rank beats the significant rank active when it was scanned
  // (the smallest significant rank above it).
  auto active_significant = [&](int i_g) {
    int smallest_above = t;
    for (int s : sig)
      if (s > i_g && s < smallest_above) smallest_above = s;
    return smallest_above;
  };
  for (int i_g : good) {
    if (i_g == t) continue;
    int anchor = active_significant(i_g);
    bool ok = rep.raw_estimates[i_g] > T * rep.kept_estimates[anchor];
    detail::expect(out, "good rank " + std::to_string(i_g) + " beats factor T", ok);
  }

  // Pairwise growth along the significant chain.
  for (std::size_t a = 0; a < sig.size(); ++a) {
    for (std::size_t b = a + 1; b < sig.size(); ++b) {
      bool ok = rep.kept_estimates[sig[b]] > T * rep.kept_estimates[sig[a]];
      detail::expect(out, "suffix estimates grow by > T along significant chain", ok);
    }
  }
  for (std::size_t a = 0; a + 1 < sig.size(); ++a) {
    bool ok = rep.contributions[sig[a + 1]] >= c * rep.contributions[sig[a]];
    detail::expect(out, "contributions grow by >= c along significant chain", ok);
  }
  for (int i_g : good) {
    for (int i_s : sig) {
      if (i_g < i_s) {
        bool ok = rep.kept_estimates[i_g] > T * rep.kept_estimates[i_s];
        detail::expect(out, "good below significant beats factor T", ok);
      }
    }
  }

  // Accuracy sandwich per rank: S_i / lambda <= raw estimate <= 2 S_i.
  for (int i = 0; i <= t; ++i) {
    Rational s(dec.suffix_sizes[i]);
    bool ok = lambda * rep.raw_estimates[i] >= s && rep.raw_estimates[i] <= Rational(2) * s;
    detail::expect(out, "suffix sandwich at rank " + std::to_string(i), ok,
                   "estimate " + rep.raw_estimates[i].to_string() + " vs suffix " +
                       s.to_string());
  }

  // Good-rank increments track the layer sums strictly.
  for (int i_g : good) {
    if (i_g == t) continue;
    std::size_t l = 0;
    while (l < sig.size() && sig[l] > i_g) ++l;
    int upper = sig[l - 1];  // l >= 1 since sig[0] = t > i_g
    long long sum = 0;
    for (int i = i_g; i <= upper - 1; ++i) sum += dec.layer_sizes[i];
    Rational diff = rep.raw_estimates[i_g] - rep.kept_estimates[upper];
    bool lower_ok = Rational(sum) < Rational(2) * lambda * diff;
    bool upper_ok = Rational(2) * diff < Rational(5) * Rational(sum);
    detail::expect(out, "increment brackets layers at good rank " + std::to_string(i_g),
                   lower_ok && upper_ok,
                   "sum " + std::to_string(sum) + " diff " + diff.to_string());
  }
  {
    Rational mt(dec.layer_sizes[t]);
    bool ok = lambda * rep.raw_estimates[t] >= mt &&
              rep.raw_estimates[t] <= Rational(2) * mt;
    detail::expect(out, "top layer sandwich", ok);
  }

  // Contribution brackets and geometric growth of the block sums.
  auto blocks = detail::block_sums(rep, dec);
  for (std::size_t l = 0; l < sig.size(); ++l) {
    Rational d(blocks[l]);
    const Rational& r = rep.contributions[sig[l]];
    bool ok = Rational(2) * lambda * r >= d && Rational(2) * r <= Rational(5) * d;
    detail::expect(out, "contribution brackets block " + std::to_string(l + 1), ok,
                   "block " + d.to_string() + " contribution " + r.to_string());
  }
  for (std::size_t l = 0; l + 1 < blocks.size(); ++l) {
    bool ok = Rational(5) * lambda * Rational(blocks[l + 1]) >= c * Rational(blocks[l]);
    detail::expect(out, "block sums grow geometrically", ok);
  }

  // Charging bound: skipped layers between significant ranks are covered by
  // (2 lambda T + 25 lambda^2) times the block below.
  Rational charge = Rational(2) * lambda * T + Rational(25) * lambda * lambda;
  for (std::size_t l = 0; l + 1 < sig.size(); ++l) {
    long long sum = 0;
    for (int i = sig[l + 1] + 1; i <= sig[l] - 1; ++i) sum += dec.layer_sizes[i];
    bool ok = Rational(sum) <= charge * Rational(blocks[l]);
    detail::expect(out, "charging bound between significant ranks", ok);
  }
  if (!sig.empty() && sig.back() != 0) {
    long long sum = 0;
    for (int i = 0; i <= sig.back() - 1; ++i) sum += dec.layer_sizes[i];
    bool ok = Rational(sum) <= charge * Rational(blocks.back());
    detail::expect(out, "charging bound below the last significant rank", ok);
  }

  return out;
}

inline bool all_pass(const std::vector<RankAssertion>& checks) {
  for (const auto& a : checks)
    if (!a.ok) return false;
  return true;
}

}  // namespace streammatch
