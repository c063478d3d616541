#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "fftplan/cli.hpp"
#include "fftplan/errors.hpp"
#include "fftplan/fixtures_data.hpp"
#include "json.hpp"

namespace fftplan::cli {

void CliConfig::validate() const {
  if (!is_transform_size(n) || n < 4 || n > (std::size_t{1} << 20)) {
    throw UsageError("--n must be a power of two in [4, 1048576], got " + std::to_string(n));
  }
  if (context_order != 0 && context_order != 1) {
    throw UsageError("--context-order must be 0 or 1");
  }
  if (trials < 1) throw UsageError("--trials must be >= 1");
  if (warmup < 0) throw UsageError("--warmup must be >= 0");
  if (runs < 1) throw UsageError("--runs must be >= 1");
}

std::optional<std::string_view> builtin_cost_model(std::string_view name) {
  if (name == "m1-qualitative") return fixtures::kM1Qualitative;
  return std::nullopt;
}

CostModel read_cost_model(const std::string& source) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    if (!in) throw IoError("cannot read cost model '" + source + "'");
    return load_cost_model(text.str());
  }
  if (auto doc = builtin_cost_model(source)) return load_cost_model(*doc);
  throw IoError("no cost model file or built-in model named '" + source + "'");
}

namespace {

using ojson = nlohmann::ordered_json;

TimingConfig timing_from(const CliConfig& cfg, const Runtime& rt) {
  TimingConfig t;
  t.trials = cfg.trials;
  t.warmup = cfg.warmup;
  t.runs = cfg.runs;
  t.seed = cfg.seed;
  t.clock = rt.clock;
  if (rt.clobber_bytes) t.clobber_bytes = *rt.clobber_bytes;
  t.path = cfg.kernel_path();
  return t;
}

std::shared_ptr<const TwiddleTable> twiddles_for(std::size_t n, const Runtime& rt) {
  TwiddleTable tw(n);
  if (rt.twiddle_hook) rt.twiddle_hook(tw);
  return std::make_shared<const TwiddleTable>(std::move(tw));
}

CostModel synthetic_model(const CliConfig& cfg) {
  auto model = read_cost_model(*cfg.cost_model_path);
  const int stages = stage_count(cfg.n);
  if (model.stages() != stages) {
    throw UsageError("cost model is for L = " + std::to_string(model.stages()) + " but --n " +
                     std::to_string(cfg.n) + " needs L = " + std::to_string(stages));
  }
  return model;
}

// Weights a search of the given order consumes.
CostModel model_for_order(const CostModel& model, int order) {
  return order == 0 ? collapse_context(model) : model;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string steps_text(const Arrangement& a) {
  std::string s;
  for (const auto& st : a.steps) {
    if (!s.empty()) s += ' ';
    s += std::string(to_string(st.edge)) + "@" + std::to_string(st.stage);
  }
  return s;
}

}  // namespace

int cmd_plan(const CliConfig& cfg, std::ostream& out, const Runtime& rt) {
  cfg.validate();
  const int stages = stage_count(cfg.n);
  const auto graph = build_graph(stages, cfg.context_order);
  const auto timing = timing_from(cfg, rt);
  const bool synthetic = cfg.cost_model_path.has_value();

  std::optional<CostModel> costs;
  std::size_t measurements = 0;
  if (synthetic) {
    costs = model_for_order(synthetic_model(cfg), cfg.context_order);
  } else {
    auto measured = measure_all_edges(graph, cfg.n, timing);
    measurements = measured.measurements;
    costs = std::move(measured.model);
  }

  const auto best = shortest_path(graph, *costs);
  const auto plan = compile_plan(best, twiddles_for(cfg.n, rt));
  const double error = verify_plan(plan, init_signal(cfg.n, cfg.seed), cfg.kernel_path());
  const bool ok = error <= kVerifyTolerance;
  std::optional<double> observed;
  if (!synthetic) observed = protocol_timer(timing)(plan);

  switch (cfg.output) {
    case OutputFormat::text:
      out << "arrangement: " << best.to_string() << "\n"
          << "steps: " << steps_text(best) << "\n"
          << "n: " << cfg.n << " (L = " << stages << "), context order " << cfg.context_order
          << ", " << (synthetic ? "synthetic costs (" + *cfg.cost_model_path + ")"
                                : "measured costs (" + std::to_string(measurements) + " edges)")
          << "\n"
          << "predicted: " << fixed(best.cost_ns, 1) << " ns";
      if (best.cost_ns > 0) out << ", " << fixed(gflops(best.cost_ns, cfg.n), 2) << " GFLOPS";
      out << "\n";
      if (observed) {
        out << "observed: " << fixed(*observed, 1) << " ns";
        if (*observed > 0) out << ", " << fixed(gflops(*observed, cfg.n), 2) << " GFLOPS";
        out << "\n";
      } else {
        out << "observed: not measured (synthetic costs)\n";
      }
      out << "verification: rel L2 error " << scientific(error) << " (tolerance "
          << format_number(kVerifyTolerance) << ") " << (ok ? "PASS" : "FAIL") << "\n";
      break;
    case OutputFormat::json: {
      ojson doc;
      doc["command"] = "plan";
      doc["n"] = cfg.n;
      doc["context_order"] = cfg.context_order;
      doc["costs"] = synthetic ? "synthetic" : "measured";
      doc["measurements"] = measurements;
      doc["arrangement"] = best.to_string();
      auto steps = ojson::array();
      for (const auto& st : best.steps) {
        steps.push_back({{"edge", std::string(to_string(st.edge))}, {"stage", st.stage}});
      }
      doc["steps"] = std::move(steps);
      doc["predicted_ns"] = best.cost_ns;
      doc["observed_ns"] = observed ? ojson(*observed) : ojson(nullptr);
      doc["verification_error"] = error;
      doc["verified"] = ok;
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv:
      out << "arrangement,predicted_ns,observed_ns,verification_error,verified\n"
          << best.to_string() << ',' << format_number(best.cost_ns) << ','
          << (observed ? format_number(*observed) : "") << ',' << format_number(error) << ','
          << (ok ? "true" : "false") << "\n";
      break;
  }
  return ok ? kOk : kVerificationFailed;
}

int cmd_bench_edges(const CliConfig& cfg, std::ostream& out, const Runtime& rt) {
  cfg.validate();
  if (cfg.cost_model_path) {
    throw UsageError("bench-edges measures this host; --cost-model is not accepted");
  }
  const int stages = stage_count(cfg.n);
  const auto timing = timing_from(cfg, rt);
  const auto measured = measure_all_edges(build_graph(stages, cfg.context_order), cfg.n, timing);
  if (cfg.save_model_path) write_file(*cfg.save_model_path, save_cost_model(measured.model));
  const auto passes = per_pass_profile(cfg.n, timing);

  switch (cfg.output) {
    case OutputFormat::text:
      out << "measured " << measured.measurements << " edges (n = " << cfg.n
          << ", context order " << cfg.context_order << ")\n";
      if (cfg.save_model_path) {
        out << "saved cost model to " << *cfg.save_model_path << "\n";
      } else {
        out << "cost model not saved (pass --save-model <path>)\n";
      }
      out << render_passes(passes, cfg.n, cfg.output);
      break;
    case OutputFormat::json: {
      ojson doc;
      doc["command"] = "bench-edges";
      doc["context_order"] = cfg.context_order;
      doc["measurements"] = measured.measurements;
      doc["model_path"] = cfg.save_model_path ? ojson(*cfg.save_model_path) : ojson(nullptr);
      const auto profile = ojson::parse(render_passes(passes, cfg.n, OutputFormat::json));
      doc["n"] = profile["n"];
      doc["passes"] = profile["passes"];
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv:
      out << render_passes(passes, cfg.n, cfg.output);
      break;
  }
  return kOk;
}

int cmd_compare(const CliConfig& cfg, std::ostream& out, const Runtime& rt) {
  cfg.validate();
  const int stages = stage_count(cfg.n);
  PerfReport report;
  if (cfg.cost_model_path) {
    const auto model = synthetic_model(cfg);
    const auto lineup = comparison_lineup(stages, collapse_context(model), model);
    report = compare_arrangements(lineup, cfg.n, model_timer(model), &model);
  } else {
    const auto timing = timing_from(cfg, rt);
    const auto free_model = measure_all_edges(build_graph(stages, 0), cfg.n, timing).model;
    const auto aware_model = measure_all_edges(build_graph(stages, 1), cfg.n, timing).model;
    const auto lineup = comparison_lineup(stages, free_model, aware_model);
    report = compare_arrangements(lineup, cfg.n, timing, &aware_model);
  }

  out << render_comparison(report, cfg.output);
  if (cfg.output == OutputFormat::text) {
    const ComparisonRow* fused = nullptr;
    const ComparisonRow* plain = nullptr;
    for (const auto& r : report.rows) {
      const bool has_fused = !r.arrangement.steps.empty() && is_fused(r.arrangement.steps.back().edge);
      auto& slot = has_fused ? fused : plain;
      if (!slot || r.time_ns < slot->time_ns) slot = &r;
    }
    if (fused && plain) {
      out << "\nfastest fused: " << fused->arrangement.to_string() << " ("
          << fixed(fused->time_ns, 1) << " ns); fastest non-fused: "
          << plain->arrangement.to_string() << " (" << fixed(plain->time_ns, 1)
          << " ns); non-fused/fused = " << fixed(plain->time_ns / fused->time_ns, 2) << "x\n";
    }
  }
  return kOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out, const Runtime& rt) {
  cfg.validate();
  const int stages = stage_count(cfg.n);
  std::vector<NamedArrangement> targets;
  if (cfg.n <= 64) {
    for (auto& a : enumerate_paths(build_graph(stages, 0))) {
      targets.emplace_back(a.to_string(), std::move(a));
    }
  } else {
    if (stages == 10) {
      targets = named_arrangements(stages);
    } else {
      targets.emplace_back("pure radix-2", Arrangement::from_edges(std::vector<EdgeType>(
                                               static_cast<std::size_t>(stages), EdgeType::R2)));
    }
    for (auto& a : sample_paths(stages, 20, cfg.seed)) {
      targets.emplace_back("sample " + a.to_string(), std::move(a));
    }
  }

  const auto tw = twiddles_for(cfg.n, rt);
  const auto input = init_signal(cfg.n, cfg.seed);
  const SpectrumOracle oracle(input);
  double max_error = 0.0;
  std::vector<std::pair<std::string, double>> results;
  std::vector<std::pair<std::string, double>> failures;
  for (const auto& [name, a] : targets) {
    const auto plan = compile_plan(a, tw);
    const double e = oracle.error(execute_plan(plan, input, cfg.kernel_path()));
    results.emplace_back(name, e);
    if (!(e <= kVerifyTolerance)) failures.emplace_back(name, e);
    if (!(e <= max_error)) max_error = e;
  }
  const bool ok = failures.empty();

  switch (cfg.output) {
    case OutputFormat::text:
      out << "verified " << targets.size() << " arrangements at n = " << cfg.n
          << ", max rel L2 error " << scientific(max_error) << " (tolerance "
          << format_number(kVerifyTolerance) << ")\n";
      for (const auto& [name, e] : failures) {
        out << "FAIL " << name << ": rel L2 error " << scientific(e) << "\n";
      }
      out << (ok ? "PASS" : "FAIL") << "\n";
      break;
    case OutputFormat::json: {
      ojson doc;
      doc["command"] = "verify";
      doc["n"] = cfg.n;
      doc["checked"] = targets.size();
      doc["max_error"] = max_error;
      doc["tolerance"] = kVerifyTolerance;
      auto fails = ojson::array();
      for (const auto& [name, e] : failures) fails.push_back({{"arrangement", name}, {"error", e}});
      doc["failures"] = std::move(fails);
      doc["passed"] = ok;
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv:
      out << "arrangement,error,passed\n";
      for (const auto& [name, e] : results) {
        out << name << ',' << format_number(e) << ',' << (e <= kVerifyTolerance ? "true" : "false")
            << "\n";
      }
      break;
  }
  return ok ? kOk : kVerificationFailed;
}

int cmd_export_graph(const CliConfig& cfg, std::ostream& out, const Runtime&) {
  cfg.validate();
  const auto graph = build_graph(stage_count(cfg.n), cfg.context_order);
  std::optional<CostModel> costs;
  if (cfg.cost_model_path) costs = model_for_order(synthetic_model(cfg), cfg.context_order);
  const auto text = export_graph(graph, costs ? &*costs : nullptr);
  if (!cfg.export_path) {
    out << text;
    return kOk;
  }
  write_file(*cfg.export_path, text);
  if (cfg.output == OutputFormat::json) {
    ojson doc;
    doc["command"] = "export-graph";
    doc["path"] = *cfg.export_path;
    doc["nodes"] = graph.nodes().size();
    doc["edges"] = graph.edges().size();
    doc["full_product_nodes"] = graph.full_product_node_count();
    out << doc.dump(2) << "\n";
  } else {
    out << "wrote " << graph.nodes().size() << " nodes and " << graph.edges().size()
        << " edges to " << *cfg.export_path << "\n";
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const Runtime& rt) {
  CLI::App app{"Self-tuning FFT planner: shortest-path search over measured pass costs",
               "fftplan"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig cfg;
  std::string output = "text";
  std::string vector = "on";
  std::string cost_model;
  std::string save_model;
  std::string export_path;

  app.add_option("--n", cfg.n, "Transform size, a power of two in [4, 2^20]")->capture_default_str();
  app.add_option("--context-order", cfg.context_order, "0: context-free, 1: context-aware")
      ->check(CLI::IsMember({0, 1}))
      ->capture_default_str();
  app.add_option("--trials", cfg.trials, "Timed trials per run")->capture_default_str();
  app.add_option("--warmup", cfg.warmup, "Discarded warmup trials per run")->capture_default_str();
  app.add_option("--runs", cfg.runs, "Independent runs averaged")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Signal seed")->capture_default_str();
  app.add_option("--cost-model", cost_model,
                 "Cost-model file or built-in name; enables synthetic mode");
  app.add_option("--save-model", save_model, "Where bench-edges writes the measured model");
  app.add_option("--output", output, "Report format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--export", export_path, "Where export-graph writes the graph");
  app.add_option("--vector", vector, "Four-lane kernels")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();

  auto* plan = app.add_subcommand("plan", "Find, verify and run the fastest arrangement");
  auto* bench = app.add_subcommand("bench-edges", "Measure every edge and profile each pass");
  auto* compare = app.add_subcommand("compare", "Compare fixed arrangements with both searches");
  auto* verify = app.add_subcommand("verify", "Check arrangements against the reference DFT");
  auto* exportg = app.add_subcommand("export-graph", "Write the decomposition graph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  if (app.count("--cost-model")) cfg.cost_model_path = cost_model;
  if (app.count("--save-model")) cfg.save_model_path = save_model;
  if (app.count("--export")) cfg.export_path = export_path;
  cfg.output = output == "json" ? OutputFormat::json
               : output == "csv" ? OutputFormat::csv
                                 : OutputFormat::text;
  cfg.vector = vector == "on";

  try {
    if (*plan) return cmd_plan(cfg, out, rt);
    if (*bench) return cmd_bench_edges(cfg, out, rt);
    if (*compare) return cmd_compare(cfg, out, rt);
    if (*verify) return cmd_verify(cfg, out, rt);
    if (*exportg) return cmd_export_graph(cfg, out, rt);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const ModelError& e) {
    err << "invalid cost model: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace fftplan::cli
