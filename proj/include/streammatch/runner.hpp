#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "streammatch/arboricity_estimator.hpp"
#include "streammatch/black_boxes.hpp"
#include "streammatch/combinator.hpp"
#include "streammatch/core.hpp"
#include "streammatch/matching.hpp"
#include "streammatch/tree_estimator.hpp"

// Experiment runner: applies a named estimator to a parsed stream and
// produces a RunReport. Reports are deterministic for a fixed seed except
// for the wall_ms field.

namespace streammatch {

struct RunConfig {
  std::string algo = "combinator";  // tree | arboricity | combinator
  std::string blackbox = "exact";   // exact | greedy | tutte | arboricity
  double eps = 0.3;
  Rational eps_exact = Rational(3, 10);
  double delta = 0.05;
  int passes = 1;
  double alpha = 3.0;
  std::uint64_t seed = 0;
};

struct RunReport {
  std::string algorithm;
  nlohmann::ordered_json config;
  double estimate = 0.0;
  std::optional<double> exact;
  std::optional<double> ratio;
  nlohmann::ordered_json sketch_words;
  long long total_words = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> failures;
  std::optional<nlohmann::ordered_json> rank_report;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["algorithm"] = algorithm;
    j["config"] = config;
    j["estimate"] = estimate;
    if (exact) j["exact"] = *exact;
    if (ratio) j["ratio"] = *ratio;
    j["sketch_words"] = sketch_words;
    j["total_words"] = total_words;
    j["wall_ms"] = wall_ms;
    j["seed"] = seed;
    j["failures"] = failures;
    if (rank_report) j["rank_report"] = *rank_report;
    return j;
  }
};

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["algo"] = cfg.algo;
  j["blackbox"] = cfg.blackbox;
  j["eps"] = cfg.eps;
  j["delta"] = cfg.delta;
  j["passes"] = cfg.passes;
  j["alpha"] = cfg.alpha;
  return j;
}

inline RunReport run_estimator(const StreamSource& stream, const RunConfig& cfg) {
  RunReport rep;
  rep.algorithm = cfg.algo;
  rep.config = config_json(cfg);
  rep.seed = cfg.seed;
  auto t0 = std::chrono::steady_clock::now();

  try {
    if (cfg.algo == "tree") {
      TreeMatchingEstimator est(stream.n, cfg.eps, cfg.delta, cfg.seed);
      for (const auto& up : stream.updates()) est.update(up);
      rep.estimate = est.estimate();
      rep.total_words = est.size_words();
      rep.sketch_words["l0_estimator"] = est.size_words();
    } else if (cfg.algo == "arboricity") {
      ArboricityConfig acfg;
      acfg.alpha = cfg.alpha;
      acfg.eps = cfg.eps_exact;
      acfg.passes = cfg.passes;
      acfg.seed = cfg.seed;
      ArboricityMatchingEstimator est(stream.n, acfg);
      for (int p = 0; p < cfg.passes; ++p) {
        const auto& ups = stream.passes[std::min<std::size_t>(p, stream.passes.size() - 1)];
        for (const auto& up : ups) est.update(up);
        if (p + 1 < cfg.passes) est.end_of_pass();
      }
      auto r = est.finalize();
      rep.estimate = r.value;
      rep.sketch_words["rank_gate"] = est.gate_words();
      rep.sketch_words["heavy_degrees"] = est.heavy_words();
      rep.sketch_words["shallow"] = est.shallow_words();
      rep.total_words = est.size_words();
      rep.config["branch"] = r.branch == ArboricityEstimate::Branch::kRankDoubling
                                 ? "rank_doubling"
                                 : "heavy_shallow";
    } else if (cfg.algo == "combinator") {
      BlackBoxOptions opts;
      opts.alpha = cfg.alpha;
      opts.eps = cfg.eps_exact;
      auto handle = make_black_box(cfg.blackbox, opts);
      auto rr = run_combinator(stream, handle, cfg.seed);
      rep.estimate = rr.estimate.to_double();
      rep.total_words = rr.words;
      rep.sketch_words["rank_instances"] = rr.words;
      rep.rank_report = rr.to_json();
    } else {
      throw std::invalid_argument("unknown algorithm: " + cfg.algo);
    }
  } catch (const SamplerFailure& e) {
    rep.failures.push_back(std::string("sampler_failure: ") + e.what());
  } catch (const RecoveryFailure& e) {
    rep.failures.push_back(std::string("recovery_failure: ") + e.what());
  }

  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

struct OracleReport {
  long long size = 0;
  std::optional<long long> weight;
  double wall_ms = 0.0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["size"] = size;
    if (weight) j["weight"] = *weight;
    j["wall_ms"] = wall_ms;
    return j;
  }
};

inline OracleReport run_oracle(const StreamSource& stream) {
  OracleReport rep;
  auto t0 = std::chrono::steady_clock::now();
  auto g = replay(stream);
  rep.size = exact_max_matching(g).size;
  if (stream.weighted && g.n <= 24) rep.weight = exact_max_weight_matching(g).weight;
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

}  // namespace streammatch
