#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fftplan/cli.hpp"
#include "fftplan/errors.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace fftplan;
using namespace fftplan::cli;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Runtime fake_runtime(std::int64_t tick = 50) {
  Runtime rt;
  rt.clock = fftplan::testing::fake_clock({tick});
  rt.clobber_bytes = 0;
  return rt;
}

Result run_cli(std::vector<std::string> args, const Runtime& rt = fake_runtime()) {
  args.insert(args.begin(), "fftplan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err, rt);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split_csv_line(line));
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fftplan_cli_test_" + name);
}

const std::vector<std::string> kFast = {"--trials", "1", "--warmup", "0", "--runs", "1"};

std::vector<std::string> with_fast(std::vector<std::string> args) {
  args.insert(args.end(), kFast.begin(), kFast.end());
  return args;
}

}  // namespace

TEST_CASE("config validation") {
  CliConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.n = 6;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.n = 2;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.n = std::size_t{1} << 21;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.n = 4;
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == kUsage);
  CHECK(run_cli({"frobnicate"}).code == kUsage);
  CHECK(run_cli({"verify", "--n", "6"}).code == kUsage);
  CHECK(run_cli({"verify", "--n", "2"}).code == kUsage);
  CHECK(run_cli({"plan", "--context-order", "2"}).code == kUsage);
  CHECK(run_cli({"plan", "--output", "xml"}).code == kUsage);
  CHECK(run_cli({"plan", "--vector", "maybe"}).code == kUsage);
  CHECK(run_cli({"bench-edges", "--cost-model", "m1-qualitative"}).code == kUsage);
  CHECK(run_cli({"--help"}).code == kOk);
}

TEST_CASE("missing model file exits 4, invalid model exits 2") {
  CHECK(run_cli({"plan", "--cost-model", "/nonexistent/model.json"}).code == kIoError);
  const auto bad = temp_path("bad.json");
  std::ofstream(bad) << R"({"L": 10, "context_order": 1, "entries": [{"edge": "R16", "stage": 0, "prev": "start", "ns": 1}]})";
  const auto r = run_cli({"plan", "--cost-model", bad.string()});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("unknown edge") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("model size must match n") {
  CHECK(run_cli({"plan", "--n", "512", "--cost-model", "m1-qualitative"}).code == kUsage);
}

TEST_CASE("builtin fixture is byte-stable") {
  const auto text = builtin_cost_model("m1-qualitative");
  REQUIRE(text.has_value());
  const auto model = load_cost_model(*text);
  CHECK(model.stages() == 10);
  CHECK(model.context_order() == 1);
  CHECK(model.size() == 75);
  CHECK(save_cost_model(model) == *text);
  CHECK_FALSE(builtin_cost_model("nope").has_value());
  CHECK_THROWS_AS(read_cost_model("nope"), IoError);
}

TEST_CASE("plan on the fixture") {
  const auto aware = run_cli({"plan", "--cost-model", "m1-qualitative", "--output", "json"});
  REQUIRE(aware.code == kOk);
  const auto doc = json::parse(aware.out);
  CHECK(doc["arrangement"] == "R4 R2 R4 R4 F8");
  CHECK(doc["verified"] == true);
  CHECK(doc["verification_error"].get<double>() < 1e-5);
  CHECK(doc["predicted_ns"].get<double>() == doctest::Approx(4783.6));
  CHECK(doc["observed_ns"].is_null());

  const auto flat = run_cli({"plan", "--cost-model", "m1-qualitative", "--context-order", "0",
                             "--output", "json"});
  REQUIRE(flat.code == kOk);
  CHECK(json::parse(flat.out)["arrangement"] == "R4 R4 R4 F16");

  const auto text = run_cli({"plan", "--cost-model", "m1-qualitative"});
  CHECK(text.out.find("R4 R2 R4 R4 F8") != std::string::npos);
  CHECK(text.out.find("PASS") != std::string::npos);

  const auto csv = parse_csv(run_cli({"plan", "--cost-model", "m1-qualitative", "--output", "csv"}).out);
  REQUIRE(csv.size() == 2);
  CHECK(csv[0][0] == "arrangement");
  CHECK(csv[1][0] == "R4 R2 R4 R4 F8");
}

TEST_CASE("plan output is deterministic") {
  const auto a = run_cli({"plan", "--cost-model", "m1-qualitative", "--output", "json"});
  const auto b = run_cli({"plan", "--cost-model", "m1-qualitative", "--output", "json"});
  CHECK(a.out == b.out);
}

TEST_CASE("hardware-mode plan with a fake clock") {
  const auto r = run_cli(with_fast({"plan", "--n", "64", "--output", "json"}));
  REQUIRE(r.code == kOk);
  const auto doc = json::parse(r.out);
  CHECK(doc["measurements"] == build_graph(6, 1).edges().size());
  CHECK(doc["observed_ns"].is_number());
  CHECK(doc["verified"] == true);
  // Uniform weights: two edges is the minimum at L = 6.
  CHECK(doc["steps"].size() == 2);
}

TEST_CASE("bench-edges counts and saves") {
  const auto path = temp_path("bench.json");
  const auto r = run_cli(with_fast({"bench-edges", "--n", "8", "--context-order", "0",
                                    "--save-model", path.string()}));
  REQUIRE(r.code == kOk);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto m = load_cost_model(ss.str());
  CHECK(m.size() == 7);
  CHECK(m.provenance() == Provenance::measured);
  std::filesystem::remove(path);

  const auto j = run_cli(with_fast({"bench-edges", "--n", "1024", "--output", "json"}));
  REQUIRE(j.code == kOk);
  const auto doc = json::parse(j.out);
  CHECK(doc["measurements"] == 75);
}

TEST_CASE("compare renders all formats consistently") {
  const auto j = run_cli({"compare", "--cost-model", "m1-qualitative", "--output", "json"});
  REQUIRE(j.code == kOk);
  const auto doc = json::parse(j.out);
  REQUIRE(doc["rows"].size() == 10);
  CHECK(doc["rows"][9]["name"] == "Dijkstra (context-aware)");
  CHECK(doc["rows"][9]["percent_of_best"] == 100.0);

  const auto c = parse_csv(run_cli({"compare", "--cost-model", "m1-qualitative", "--output", "csv"}).out);
  REQUIRE(c.size() == 11);
  CHECK(c[0] == std::vector<std::string>{"name", "time_ns", "gflops", "percent_of_best"});
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(c[i + 1][0] == doc["rows"][i]["name"].get<std::string>());
    CHECK(std::stod(c[i + 1][1]) == doc["rows"][i]["time_ns"].get<double>());
    CHECK(std::stod(c[i + 1][3]) == doc["rows"][i]["percent_of_best"].get<double>());
  }

  const auto t = run_cli({"compare", "--cost-model", "m1-qualitative"});
  CHECK(t.out.find("Dijkstra (context-free)") != std::string::npos);
  CHECK(t.out.find("% of best") != std::string::npos);
}

TEST_CASE("compare in hardware mode") {
  const auto r = run_cli(with_fast({"compare", "--n", "64", "--output", "json"}));
  REQUIRE(r.code == kOk);
  CHECK(json::parse(r.out)["rows"].size() == 3);
}

TEST_CASE("verify passes and detects corrupted twiddles") {
  CHECK(run_cli({"verify", "--n", "8"}).code == kOk);
  CHECK(run_cli({"verify", "--n", "64", "--vector", "off"}).code == kOk);

  Runtime faulty = fake_runtime();
  // W_8^1 with the sign of its imaginary part flipped.
  faulty.twiddle_hook = [](TwiddleTable& tw) { tw.override_root(1, {0.70710677f, 0.70710677f}); };
  const auto r = run_cli({"verify", "--n", "8"}, faulty);
  CHECK(r.code == kVerificationFailed);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("export-graph") {
  const auto dot = run_cli({"export-graph", "--n", "1024", "--context-order", "1"});
  REQUIRE(dot.code == kOk);
  std::size_t arrows = 0;
  std::istringstream in(dot.out);
  std::string line;
  while (std::getline(in, line)) arrows += line.find("->") != std::string::npos;
  CHECK(arrows == 75);

  const auto path = temp_path("graph.dot");
  CHECK(run_cli({"export-graph", "--n", "1024", "--context-order", "0", "--export", path.string()}).code == kOk);
  std::ifstream file(path);
  std::stringstream ss;
  ss << file.rdbuf();
  CHECK(ss.str() == export_graph(build_graph(10, 0)));
  std::filesystem::remove(path);

  CHECK(run_cli({"export-graph", "--export", "/nonexistent/dir/g.dot"}).code == kIoError);
}

TEST_CASE("format_number round-trips") {
  for (double v : {0.0, 1.0, 4783.6, 1.0972193394529089e-07, 29.73}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}
