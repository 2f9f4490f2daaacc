// Command-line front end: instance generation, estimator runs, exact
// oracles, report joining, and a quick self-test.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "streammatch/bhh.hpp"
#include "streammatch/generators.hpp"
#include "streammatch/matching.hpp"
#include "streammatch/rank_checks.hpp"
#include "streammatch/reference.hpp"
#include "streammatch/runner.hpp"
#include "streammatch/stream_io.hpp"

namespace sm = streammatch;
using nlohmann::ordered_json;

namespace {

sm::Rational parse_decimal(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return sm::Rational(std::stoll(s));
  std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
  long long den = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  long long num = (ip.empty() || ip == "-" ? 0 : std::stoll(ip)) * den;
  long long frac = fp.empty() ? 0 : std::stoll(fp);
  bool neg = !ip.empty() && ip[0] == '-';
  num += neg ? -frac : frac;
  return sm::Rational(num, den);
}

void emit(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << j.dump(2) << "\n";
  }
}

void emit_stream(const sm::StreamSource& s, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << sm::write_stream(s);
  } else {
    sm::write_stream_file(s, out_path);
  }
}

sm::StreamSource load_stream(const std::string& in_path) {
  if (in_path.empty() || in_path == "-") return sm::parse_stream(std::cin);
  return sm::parse_stream_file(in_path);
}

int cmd_gen(const std::string& kind, std::uint32_t n, std::uint32_t nu, long long W,
            const std::string& wlaw, std::uint32_t t, int parity, double churn,
            std::uint64_t seed, const std::string& out) {
  sm::StreamSource s;
  if (kind == "tree") {
    s = sm::gen_random_tree(n, seed);
  } else if (kind == "arboricity") {
    s = sm::gen_bounded_arboricity(n, nu, seed);
  } else if (kind == "weighted") {
    auto law = wlaw == "uniform" ? sm::WeightLaw::kUniform : sm::WeightLaw::kLogUniform;
    s = sm::gen_weighted(sm::gen_bounded_arboricity(n, nu, seed), W, law, seed);
  } else if (kind == "bhh") {
    auto inst = sm::random_bhh_instance(n, t, parity, seed);
    auto g = sm::bhh_graph(inst);
    s.n = g.n;
    s.weighted = false;
    s.passes.push_back(sm::insertions_of(g));
    auto eng = sm::make_engine(sm::derive(seed, 7));
    std::shuffle(s.passes[0].begin(), s.passes[0].end(), eng);
  } else {
    throw std::invalid_argument("unknown kind: " + kind);
  }
  if (churn > 0) s = sm::shuffle_with_deletions(s, churn, sm::derive(seed, 8));
  emit_stream(s, out);
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  {  // sketches return to zero on cancelling streams
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      sm::L0Estimator est(256, 0.3, 0.1, trial);
      sm::L0Sampler samp(256, 0.1, trial);
      sm::SparseRecovery rec(256, 8, 0.1, trial);
      sm::TutteRankSketch tutte(16, 4, trial);
      auto eng = sm::make_engine(trial);
      std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
      for (int i = 0; i < 12; ++i) {
        std::uint32_t u = eng() % 16, v = eng() % 16;
        if (u == v) continue;
        edges.push_back({u, v});
      }
      for (auto [u, v] : edges) {
        std::uint64_t coord = sm::edge_pair_id(u, v) % 256;
        est.update(coord, +1);
        samp.update(coord, +1);
        rec.update(coord, +1);
        tutte.update(u, v, +1);
      }
      for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        std::uint64_t coord = sm::edge_pair_id(it->first, it->second) % 256;
        est.update(coord, -1);
        samp.update(coord, -1);
        rec.update(coord, -1);
        tutte.update(it->first, it->second, -1);
      }
      ok = ok && est.is_zero_state() && samp.is_zero_state() && rec.is_zero_state() &&
           tutte.is_zero_state();
    }
    report("sketch cancellation to zero state", ok);
  }

  {  // stream round trip
    auto s = sm::gen_weighted(sm::gen_bounded_arboricity(20, 2, 5), 64,
                              sm::WeightLaw::kLogUniform, 5);
    auto churned = sm::shuffle_with_deletions(s, 0.3, 6);
    std::string text = sm::write_stream(churned);
    std::istringstream in(text);
    auto parsed = sm::parse_stream(in);
    report("stream file round trip", sm::write_stream(parsed) == text);
  }

  {  // oracle fixtures
    auto k3 = sm::make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    bool ok = sm::exact_max_matching(k3).size == 1;
    auto path = sm::make_graph(3, {{0, 1, 1}, {1, 2, 3}});
    ok = ok && sm::exact_max_weight_matching(path).weight == 3;
    ok = ok && sm::bhh_expected_matching(12, 3, 1) == 9;
    report("oracle fixtures", ok);
  }

  {  // combinator determinism and upper bound
    auto s = sm::gen_random_weighted_graph(16, 0.4, 512, sm::WeightLaw::kLogUniform, 11);
    auto a = sm::run_combinator(s, sm::make_black_box("exact"), 3);
    auto b = sm::run_combinator(s, sm::make_black_box("exact"), 3);
    bool ok = a.to_json().dump() == b.to_json().dump();
    long long wstar = sm::exact_max_weight_matching(sm::replay(s)).weight;
    ok = ok && a.estimate <= sm::Rational(wstar) &&
         sm::Rational(1520) * a.estimate >= sm::Rational(wstar);
    report("combinator determinism and bounds", ok);
  }

  std::cout << (failures == 0 ? "selftest OK" : "selftest FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}

int cmd_eval(const std::vector<std::string>& run_files,
             const std::vector<std::string>& exact_files, const std::string& out) {
  if (run_files.size() != exact_files.size())
    throw std::invalid_argument("eval needs matching --run and --exact lists");
  ordered_json rows = ordered_json::array();
  double worst = 0.0, best = 1e300;
  for (std::size_t i = 0; i < run_files.size(); ++i) {
    std::ifstream rf(run_files[i]), ef(exact_files[i]);
    if (!rf || !ef) throw std::runtime_error("cannot open report pair");
    ordered_json run = ordered_json::parse(rf), exact = ordered_json::parse(ef);
    double est = run.at("estimate").get<double>();
    double truth;
    if (run.at("algorithm") == "combinator" && exact.contains("weight")) {
      truth = exact.at("weight").get<double>();
    } else {
      truth = exact.at("size").get<double>();
    }
    ordered_json row;
    row["run"] = run_files[i];
    row["estimate"] = est;
    row["exact"] = truth;
    if (truth > 0) {
      double ratio = est / truth;
      row["ratio"] = ratio;
      worst = std::max(worst, ratio);
      best = std::min(best, ratio);
    }
    rows.push_back(row);
  }
  ordered_json j;
  j["pairs"] = rows;
  if (!rows.empty() && best <= worst) {
    j["min_ratio"] = best;
    j["max_ratio"] = worst;
  }
  emit(j, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matching estimation in dynamic graph streams"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance stream");
  std::string kind = "tree", wlaw = "log", gen_out;
  std::uint32_t n = 16, nu = 2, t = 3;
  long long W = 1024;
  int parity = 0;
  double churn = 0.0;
  std::uint64_t seed = 1;
  gen->add_option("--kind", kind, "tree | arboricity | weighted | bhh");
  gen->add_option("--n", n, "vertex count (bhh: bit count)");
  gen->add_option("--nu", nu, "arboricity bound");
  gen->add_option("--W", W, "max weight");
  gen->add_option("--wlaw", wlaw, "uniform | log");
  gen->add_option("--t", t, "bhh hyperedge arity");
  gen->add_option("--parity", parity, "bhh promised parity");
  gen->add_option("--churn", churn, "insert/delete churn in [0,1)");
  gen->add_option("--seed", seed, "run seed");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "run an estimator over a stream");
  sm::RunConfig cfg;
  std::string run_in, run_out, eps_str = "0.3";
  run->add_option("--algo", cfg.algo, "tree | arboricity | combinator");
  run->add_option("--blackbox", cfg.blackbox, "exact | greedy | tutte | arboricity");
  run->add_option("--eps", eps_str, "accuracy parameter (decimal)");
  run->add_option("--delta", cfg.delta, "failure parameter");
  run->add_option("--passes", cfg.passes, "1 or 2");
  run->add_option("--alpha", cfg.alpha, "arboricity bound");
  run->add_option("--seed", cfg.seed, "run seed");
  run->add_option("--in", run_in, "stream file (default stdin)");
  run->add_option("--out", run_out, "report file (default stdout)");

  // exact
  auto* exact = app.add_subcommand("exact", "exact oracles on the final graph");
  std::string exact_in, exact_out;
  exact->add_option("--in", exact_in, "stream file (default stdin)");
  exact->add_option("--out", exact_out, "report file (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "join run and exact reports into ratios");
  std::vector<std::string> run_files, exact_files;
  std::string eval_out;
  eval->add_option("--run", run_files, "run report files")->required();
  eval->add_option("--exact", exact_files, "exact report files")->required();
  eval->add_option("--out", eval_out, "output file (default stdout)");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(kind, n, nu, W, wlaw, t, parity, churn, seed, gen_out);
    if (run->parsed()) {
      cfg.eps_exact = parse_decimal(eps_str);
      cfg.eps = cfg.eps_exact.to_double();
      auto stream = load_stream(run_in);
      auto rep = sm::run_estimator(stream, cfg);
      emit(rep.to_json(), run_out);
      return rep.failures.empty() ? 0 : 2;
    }
    if (exact->parsed()) {
      auto stream = load_stream(exact_in);
      emit(sm::run_oracle(stream).to_json(), exact_out);
      return 0;
    }
    if (eval->parsed()) return cmd_eval(run_files, exact_files, eval_out);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const sm::ParseError& e) {
    ordered_json err{{"error", e.what()}, {"line", e.line}};
    std::cout << err.dump() << "\n";
    return 1;
  } catch (const sm::ConsistencyError& e) {
    ordered_json err{{"error", e.what()}, {"line", e.line}};
    std::cout << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    ordered_json err{{"error", e.what()}};
    std::cout << err.dump() << "\n";
    return 1;
  }
  return 0;
}
