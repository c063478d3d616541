#include "fftplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fftplan/errors.hpp"

namespace fftplan {

Plan compile_plan(const Arrangement& arrangement, std::shared_ptr<const TwiddleTable> twiddles) {
  if (!twiddles) throw PlanError("plan needs a twiddle table");
  const std::size_t n = twiddles->size();
  const int stages = twiddles->stages();
  if (arrangement.steps.empty()) throw PlanError("empty arrangement");

  int s = 0;
  for (std::size_t i = 0; i < arrangement.steps.size(); ++i) {
    const auto& st = arrangement.steps[i];
    const std::string where = std::string(to_string(st.edge)) + " at position " + std::to_string(i);
    if (st.stage != s) {
      throw PlanError(where + " starts at stage " + std::to_string(st.stage) + ", expected " +
                      std::to_string(s));
    }
    if (is_fused(st.edge) && i + 1 != arrangement.steps.size()) {
      throw PlanError(where + ": fused blocks must be the last edge");
    }
    s += span(st.edge);
  }
  if (s != stages) {
    throw PlanError("arrangement '" + arrangement.to_string() + "' spans " + std::to_string(s) +
                    " stages, n = " + std::to_string(n) + " needs " + std::to_string(stages));
  }

  Plan plan;
  plan.n = n;
  plan.invocations = arrangement.steps;
  plan.permutation = output_permutation(arrangement.spans(), n);
  plan.source = arrangement;
  plan.twiddles = std::move(twiddles);
  return plan;
}

Plan compile_plan(const Arrangement& arrangement, std::size_t n) {
  return compile_plan(arrangement, std::make_shared<const TwiddleTable>(n));
}

void execute_plan_into(const Plan& plan, SplitComplexBuffer& work, SplitComplexBuffer& out,
                       KernelPath path) {
  if (work.size() != plan.n || out.size() != plan.n) {
    throw ShapeError("buffer size " + std::to_string(work.size()) + " does not match plan size " +
                     std::to_string(plan.n));
  }
  for (const auto& st : plan.invocations) run_edge(st.edge, work, st.stage, *plan.twiddles, path);
  apply_permutation(plan.permutation, work, out);
}

SplitComplexBuffer execute_plan(const Plan& plan, const SplitComplexBuffer& input, KernelPath path) {
  if (input.size() != plan.n) {
    throw ShapeError("input size " + std::to_string(input.size()) + " does not match plan size " +
                     std::to_string(plan.n));
  }
  SplitComplexBuffer work = input;
  SplitComplexBuffer out(plan.n);
  execute_plan_into(plan, work, out, path);
  return out;
}

SpectrumOracle::SpectrumOracle(const SplitComplexBuffer& input) {
  const std::size_t n = input.size();
  if (n <= kFullOracleLimit) {
    expected_ = reference_dft(input);
    return;
  }
  const std::size_t step = n / kSpotBins;
  bins_.resize(kSpotBins);
  for (std::size_t i = 0; i < kSpotBins; ++i) bins_[i] = i * step + (i % step);
  expected_ = reference_dft_bins(input, bins_);
}

double SpectrumOracle::error(const SplitComplexBuffer& output) const {
  if (bins_.empty()) return rel_l2_error(output, expected_);
  if (output.size() < bins_.back() + 1) throw ShapeError("output smaller than oracle input");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const std::complex<double> got(output.re()[bins_[i]], output.im()[bins_[i]]);
    diff += std::norm(got - expected_[i]);
    ref += std::norm(expected_[i]);
  }
  if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(diff / ref);
}

double verify_plan(const Plan& plan, const SplitComplexBuffer& input, KernelPath path) {
  return SpectrumOracle(input).error(execute_plan(plan, input, path));
}

double gflops(double time_ns, std::size_t n) {
  if (!(time_ns > 0.0)) throw ConfigError("time must be positive");
  return 5.0 * static_cast<double>(n) * static_cast<double>(stage_count(n)) / time_ns;
}

double pass_gflops(double time_ns, std::size_t n, int span) {
  if (!(time_ns > 0.0)) throw ConfigError("time must be positive");
  stage_count(n);
  return 5.0 * static_cast<double>(n) * static_cast<double>(span) / time_ns;
}

PlanTimer protocol_timer(const TimingConfig& cfg) {
  return [cfg](const Plan& plan) {
    const auto pristine = init_signal(plan.n, cfg.seed);
    SplitComplexBuffer work = pristine;
    SplitComplexBuffer out(plan.n);
    auto prepare = [&] {
      std::copy(pristine.re().begin(), pristine.re().end(), work.re().begin());
      std::copy(pristine.im().begin(), pristine.im().end(), work.im().begin());
    };
    auto body = [&] { execute_plan_into(plan, work, out, cfg.path); };
    return run_protocol(cfg, prepare, body).ns;
  };
}

PlanTimer model_timer(const CostModel& model) {
  return [model](const Plan& plan) { return path_cost(plan.source, model); };
}

void finalize_rows(std::vector<ComparisonRow>& rows, std::size_t n) {
  if (rows.empty()) return;
  double best = rows.front().time_ns;
  for (const auto& r : rows) best = std::min(best, r.time_ns);
  for (auto& r : rows) {
    r.gflops = gflops(r.time_ns, n);
    r.percent_of_best = 100.0 * (best / r.time_ns);
  }
}

PerfReport compare_arrangements(const std::vector<NamedArrangement>& arrangements, std::size_t n,
                                const PlanTimer& timer, const CostModel* predictor) {
  PerfReport report;
  report.n = n;
  const auto tw = std::make_shared<const TwiddleTable>(n);
  for (const auto& [name, arrangement] : arrangements) {
    const Plan plan = compile_plan(arrangement, tw);
    ComparisonRow row;
    row.name = name;
    row.arrangement = arrangement;
    row.time_ns = timer(plan);
    if (predictor) row.predicted_ns = path_cost(arrangement, *predictor);
    report.rows.push_back(std::move(row));
  }
  finalize_rows(report.rows, n);
  return report;
}

PerfReport compare_arrangements(const std::vector<NamedArrangement>& arrangements, std::size_t n,
                                const TimingConfig& cfg, const CostModel* predictor) {
  return compare_arrangements(arrangements, n, protocol_timer(cfg), predictor);
}

std::vector<NamedArrangement> comparison_lineup(int stages, const CostModel& context_free,
                                                const CostModel& context_aware) {
  std::vector<NamedArrangement> lineup;
  if (stages == 10) {
    lineup = named_arrangements(stages);
  } else {
    lineup.emplace_back("R2 x " + std::to_string(stages) + " (pure radix-2)",
                        Arrangement::from_edges(std::vector<EdgeType>(
                            static_cast<std::size_t>(stages), EdgeType::R2)));
  }
  lineup.emplace_back("Dijkstra (context-free)",
                      shortest_path(build_graph(stages, 0), context_free));
  lineup.emplace_back("Dijkstra (context-aware)",
                      shortest_path(build_graph(stages, 1), context_aware));
  return lineup;
}

std::vector<PassRow> per_pass_profile(std::size_t n, const TimingConfig& cfg) {
  const TwiddleTable tw(n);
  const int stages = tw.stages();
  std::vector<PassRow> rows;
  for (int s = 0; s < stages; ++s) {
    PassRow row;
    row.label = std::to_string(s + 1);
    row.stage = s;
    row.span = 1;
    row.stride = n >> (s + 1);
    row.time_ns = measure_edge(EdgeType::R2, s, ContextTag::start, tw, cfg).ns;
    row.gflops = pass_gflops(row.time_ns, n, 1);
    rows.push_back(std::move(row));
  }
  for (EdgeType e : {EdgeType::F8, EdgeType::F16, EdgeType::F32}) {
    const int s = stages - span(e);
    if (s < 0) continue;
    PassRow row;
    row.label = std::string(to_string(e));
    row.stage = s;
    row.span = span(e);
    row.time_ns = measure_edge(e, s, ContextTag::start, tw, cfg).ns;
    row.gflops = pass_gflops(row.time_ns, n, row.span);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fftplan
