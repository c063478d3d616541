// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any gating criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fftplan/cli.hpp"
#include "fftplan/errors.hpp"
#include "fftplan/graph.hpp"
#include "fftplan/measure.hpp"
#include "fftplan/planner.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace fftplan;

namespace {

constexpr double kOracleTolerance = 1e-5;
constexpr double kGflopsTolerance = 0.15;
constexpr double kFixtureSeconds = 1.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cli(std::vector<std::string> args, std::string& out) {
  args.insert(args.begin(), "fftplan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o;
  std::ostringstream e;
  const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str() + e.str();
  return rc;
}

CostModel fixture() { return load_cost_model(*cli::builtin_cost_model("m1-qualitative")); }

Outcome oracle_correctness() {
  Outcome r;
  double worst = 0.0;
  std::size_t checked = 0;
  auto check = [&](const Plan& plan, const SplitComplexBuffer& x, const SpectrumOracle& oracle,
                   const std::string& what) {
    for (auto path : {KernelPath::scalar, KernelPath::lanes4}) {
      const double err = oracle.error(execute_plan(plan, x, path));
      worst = std::max(worst, err);
      ++checked;
      if (!(err <= kOracleTolerance)) {
        r.pass = false;
        r.detail += " [" + what + " err " + fmt("%.3e", err) + "]";
      }
    }
  };
  for (int L = 3; L <= 6; ++L) {
    const std::size_t n = std::size_t{1} << L;
    const auto tw = std::make_shared<const TwiddleTable>(n);
    const auto paths = enumerate_paths(build_graph(L, 0));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto x = init_signal(n, seed);
      const SpectrumOracle oracle(x);
      for (const auto& a : paths) check(compile_plan(a, tw), x, oracle, a.to_string());
    }
  }
  const auto m = fixture();
  auto lineup = comparison_lineup(10, collapse_context(m), m);
  for (auto& a : sample_paths(10, 20, 2024)) lineup.emplace_back("sample", a);
  const auto tw = std::make_shared<const TwiddleTable>(1024);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = init_signal(1024, seed);
    const SpectrumOracle oracle(x);
    for (const auto& [name, a] : lineup) check(compile_plan(a, tw), x, oracle, name);
  }
  r.detail = std::to_string(checked) + " executions, worst rel L2 " + fmt("%.3e", worst) +
             " (tolerance 1e-5)" + r.detail;
  return r;
}

Outcome graph_structure() {
  const auto g0 = build_graph(10, 0);
  const auto g1 = build_graph(10, 1);
  Outcome r;
  r.pass = g0.nodes().size() == 11 && g0.edges().size() == 30 && g1.full_product_node_count() == 77;
  r.detail = "order 0: " + std::to_string(g0.nodes().size()) + " nodes, " +
             std::to_string(g0.edges().size()) + " edges; order 1 full product " +
             std::to_string(g1.full_product_node_count()) + " (reachable " +
             std::to_string(g1.nodes().size()) + ")";
  return r;
}

std::string search_transcript(int& mismatches) {
  std::ostringstream log;
  for (int L : {3, 5, 8, 10}) {
    for (int order : {0, 1}) {
      const auto g = build_graph(L, order);
      for (int i = 0; i < 100; ++i) {
        const std::uint64_t seed = static_cast<std::uint64_t>(L * 1000 + order * 100 + i);
        const auto m = testing::random_model(L, order, seed, i % 2 == 0);
        const auto got = shortest_path(g, m);
        const auto want = testing::brute_force_best(g, m);
        if (got.cost_ns != want.cost_ns || !got.same_path(want)) ++mismatches;
        log << L << ' ' << order << ' ' << i << ' ' << got.to_string() << ' '
            << cli::format_number(got.cost_ns) << '\n';
      }
    }
  }
  return log.str();
}

Outcome search_optimality() {
  int first = 0;
  int second = 0;
  const auto a = search_transcript(first);
  const auto b = search_transcript(second);
  Outcome r;
  r.pass = first == 0 && second == 0 && a == b;
  r.detail = "800 models (L in {3,5,8,10}, both orders, half with integer ties): " +
             std::to_string(first) + " mismatches vs exhaustive search, repeat run " +
             (a == b ? "byte-identical" : "DIFFERS");
  return r;
}

Outcome context_sensitivity() {
  Outcome r;
  const auto t0 = std::chrono::steady_clock::now();
  std::string aware_out;
  std::string flat_out;
  std::string again_out;
  const int rc1 = cli({"plan", "--cost-model", "m1-qualitative", "--context-order", "1", "--output", "json"}, aware_out);
  const int rc0 = cli({"plan", "--cost-model", "m1-qualitative", "--context-order", "0", "--output", "json"}, flat_out);
  const int rc2 = cli({"plan", "--cost-model", "m1-qualitative", "--context-order", "1", "--output", "json"}, again_out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (rc0 != 0 || rc1 != 0 || rc2 != 0) {
    return {false, "plan exited with " + std::to_string(rc1) + "/" + std::to_string(rc0)};
  }
  const auto aware = nlohmann::json::parse(aware_out)["arrangement"].get<std::string>();
  const auto flat = nlohmann::json::parse(flat_out)["arrangement"].get<std::string>();
  const auto m = fixture();
  const double aware_cost = path_cost(parse_arrangement(aware), m);
  const double flat_cost = path_cost(parse_arrangement(flat), m);
  r.pass = aware == "R4 R2 R4 R4 F8" && flat != aware && flat_cost > aware_cost &&
           aware_out == again_out && secs < kFixtureSeconds;
  r.detail = "order 1: " + aware + " (" + cli::format_number(aware_cost) + " ns); order 0: " + flat +
             " (" + cli::format_number(flat_cost) + " ns under order-1 costs); " + fmt("%.3f", secs) +
             " s for three plans";
  return r;
}

Outcome gflops_arithmetic() {
  struct Row {
    const char* what;
    double ns;
    int span;  // 0: whole transform
    double printed;
  };
  const Row rows[] = {
      {"R2 x 10", 9014, 0, 5.7},
      {"R4 x 5", 6903, 0, 7.4},
      {"R8 x 3 + R2", 6792, 0, 7.5},
      {"R8,R8,R8,R2", 6889, 0, 7.4},
      {"R8,R8,R4,R4", 6861, 0, 7.5},
      {"R4,R8,R8,R4", 6889, 0, 7.4},
      {"R2 x 5 + F32", 2569, 0, 19.9},
      {"R4 x 3 + F16", 1764, 0, 29.1},
      {"context-free", 2320, 0, 22.1},
      {"context-aware", 1722, 0, 29.8},
      {"pass 1", 3580, 1, 1.4},
      {"pass 4", 750, 1, 6.8},
      {"pass 7", 380, 1, 13.7},
      {"pass 10", 4250, 1, 1.2},
      {"F8", 460, 3, 33.5},
      {"F16", 670, 4, 30.7},
  };
  Outcome r;
  double worst = 0.0;
  std::string failures;
  for (const auto& row : rows) {
    const double got = row.span == 0 ? gflops(row.ns, 1024) : pass_gflops(row.ns, 1024, row.span);
    const double dev = std::abs(got - row.printed);
    worst = std::max(worst, dev);
    if (dev > kGflopsTolerance) {
      r.pass = false;
      failures += std::string(" [") + row.what + ": " + fmt("%.2f", got) + " vs " +
                  fmt("%.1f", row.printed) + "]";
    }
  }
  r.detail = "16 rows, max deviation " + fmt("%.3f", worst) + " (tolerance 0.15)" + failures;
  return r;
}

double oracle_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 == 1 ? v[k / 2] : (v[k / 2 - 1] + v[k / 2]) / 2.0;
}

Outcome measurement_protocol() {
  Outcome r;
  std::mt19937_64 gen(6);
  int agreed = 0;
  int even = 0;
  const auto g = build_graph(5, 1);
  for (int seq = 0; seq < 20; ++seq) {
    const int trials = 1 + static_cast<int>(gen() % 12);
    const int warmup = static_cast<int>(gen() % 4);
    const int runs = 1 + static_cast<int>(gen() % 3);
    even += trials % 2 == 0;
    std::vector<std::int64_t> durations;
    for (int i = 0; i < (trials + warmup) * runs; ++i) {
      durations.push_back(1 + static_cast<std::int64_t>(gen() % 1000));
    }
    double sum = 0.0;
    for (int run = 0; run < runs; ++run) {
      const auto first = durations.begin() + run * (trials + warmup) + warmup;
      sum += oracle_median(std::vector<double>(first, first + trials));
    }
    const double want = sum / runs;
    const auto cfg = testing::fake_timing(durations, trials, warmup, runs);
    const auto& e = g.edges()[gen() % g.edges().size()];
    const auto& from = g.nodes()[e.from];
    const auto got = measure_edge(e.type, from.stage, from.prev, 32, cfg);
    agreed += got.ns == want;
  }
  const auto cfg = testing::fake_timing({3}, 1, 0, 1);
  const auto m0 = measure_all_edges(build_graph(10, 0), 1024, cfg).measurements;
  const auto m1 = measure_all_edges(build_graph(10, 1), 1024, cfg).measurements;
  r.pass = agreed == 20 && m0 == 30 && m1 == 75;
  r.detail = std::to_string(agreed) + "/20 fabricated sequences match (" + std::to_string(even) +
             " even-length); measurements order 0: " + std::to_string(m0) + ", order 1: " +
             std::to_string(m1) + " (expected 30, 75)";
  return r;
}

Outcome model_round_trip() {
  Outcome r;
  std::mt19937_64 gen(7);
  int ok = 0;
  for (int i = 0; i < 50; ++i) {
    const int L = 1 + static_cast<int>(gen() % 12);
    const int order = static_cast<int>(gen() % 2);
    const auto m = testing::random_model(L, order, gen(), i % 2 == 0);
    ok += load_cost_model(save_cost_model(m)) == m;
  }
  auto doc = [](int L, int order, const std::string& entries) {
    return R"({"L":)" + std::to_string(L) + R"(,"context_order":)" + std::to_string(order) +
           R"(,"entries":[)" + entries + "]}";
  };
  const std::string r2 = R"({"edge":"R2","stage":0,"prev":"start","ns":5})";
  const std::vector<std::string> invalid = {
      doc(10, 1, R"({"edge":"R3","stage":0,"prev":"start","ns":5})"),     // bad edge name
      doc(10, 1, R"({"edge":"R2","stage":0,"prev":"start","ns":-5})"),    // negative weight
      doc(10, 1, r2 + "," + r2),                                           // duplicate key
      doc(10, 0, r2),                                                      // order/prev mismatch
      doc(10, 1, R"({"edge":"R2","stage":1,"prev":"Q4","ns":5})"),        // unknown prev
      doc(10, 1, R"({"edge":"R2","stage":12,"prev":"R2","ns":5})"),       // stage out of range
      doc(10, 1, R"({"edge":"F8","stage":2,"prev":"R2","ns":5})"),        // fused not terminal
      doc(10, 1, R"({"edge":"R2","stage":1,"prev":"R8","ns":5})"),        // predecessor cannot end here
      doc(40, 1, r2),                                                      // stage count
      R"({"L":10,"context_order":1,"entries":[)",                          // truncated
  };
  std::set<ModelErrc> codes;
  int rejected = 0;
  for (const auto& text : invalid) {
    try {
      load_cost_model(text);
    } catch (const ModelError& e) {
      ++rejected;
      codes.insert(e.code());
    }
  }
  r.pass = ok == 50 && rejected == 10 && codes.size() == 10;
  r.detail = std::to_string(ok) + "/50 round trips; " + std::to_string(rejected) +
             "/10 invalid documents rejected with " + std::to_string(codes.size()) + " distinct codes";
  return r;
}

void informational_compare() {
  std::string out;
  const int rc = cli({"compare", "--n", "1024", "--vector", "on", "--trials", "15", "--warmup", "3",
                      "--runs", "1"},
                     out);
  std::cout << "INFO 8 hardware compare (vector path on, exit " << rc << "):\n";
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) std::cout << "       " << line << '\n';
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  const Criterion criteria[] = {
      {1, "oracle correctness", oracle_correctness},
      {2, "graph structure", graph_structure},
      {3, "search optimality", search_optimality},
      {4, "context sensitivity on the m1-qualitative fixture", context_sensitivity},
      {5, "GFLOPS arithmetic", gflops_arithmetic},
      {6, "measurement protocol", measurement_protocol},
      {7, "cost-model round trip", model_round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << ' ' << c.name << ": " << o.detail << std::endl;
  }
  informational_compare();
  std::cout << (failed == 0 ? "acceptance: all gating criteria passed"
                            : "acceptance: " + std::to_string(failed) + " gating criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
