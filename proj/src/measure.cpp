#include "fftplan/measure.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <string>

#include "fftplan/errors.hpp"

namespace fftplan {

Clock steady_clock_ns() {
  return [] {
    return static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                         std::chrono::steady_clock::now().time_since_epoch())
                                         .count());
  };
}

std::size_t default_clobber_bytes() {
  constexpr std::size_t kCap = std::size_t{64} << 20;
  long llc = -1;
#ifdef _SC_LEVEL3_CACHE_SIZE
  llc = sysconf(_SC_LEVEL3_CACHE_SIZE);
#endif
#ifdef _SC_LEVEL2_CACHE_SIZE
  if (llc <= 0) llc = sysconf(_SC_LEVEL2_CACHE_SIZE);
#endif
  if (llc <= 0) llc = 8L << 20;
  return std::min(kCap, 4 * static_cast<std::size_t>(llc));
}

void TimingConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (warmup < 0) throw ConfigError("warmup must be >= 0");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (!clock) throw ConfigError("timing config has no clock");
}

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Timing run_protocol(const TimingConfig& cfg, const std::function<void()>& prepare,
                    const std::function<void()>& body) {
  cfg.validate();
  std::vector<double> run_medians;
  run_medians.reserve(static_cast<std::size_t>(cfg.runs));
  std::vector<double> samples;
  for (int run = 0; run < cfg.runs; ++run) {
    samples.clear();
    for (int i = 0; i < cfg.warmup + cfg.trials; ++i) {
      if (prepare) prepare();
      const auto t0 = cfg.clock();
      body();
      const auto t1 = cfg.clock();
      if (i >= cfg.warmup) samples.push_back(static_cast<double>(t1 - t0));
    }
    run_medians.push_back(median(samples));
  }
  Timing t;
  double sum = 0.0;
  for (double m : run_medians) sum += m;
  t.ns = sum / static_cast<double>(run_medians.size());
  t.run_min_ns = *std::min_element(run_medians.begin(), run_medians.end());
  t.run_max_ns = *std::max_element(run_medians.begin(), run_medians.end());
  return t;
}

namespace {

class CacheClobber {
 public:
  explicit CacheClobber(std::size_t bytes) : scratch_(bytes, 0) {}

  void sweep() {
    if (scratch_.empty()) return;
    for (std::size_t i = 0; i < scratch_.size(); i += 64) ++scratch_[i];
    sink_ = scratch_[scratch_.size() / 2];
  }

 private:
  std::vector<unsigned char> scratch_;
  volatile unsigned char sink_ = 0;
};

}  // namespace

Timing measure_edge(EdgeType edge, int s, ContextTag prev, const TwiddleTable& tw,
                    const TimingConfig& cfg) {
  const int stages = tw.stages();
  if (!edge_fits(edge, s, stages)) {
    throw PlacementError(std::string(to_string(edge)) + " cannot start at stage " +
                         std::to_string(s) + " of " + std::to_string(stages));
  }
  if (!context_fits(prev, s, stages)) {
    throw PlacementError(std::string(to_string(prev)) + " cannot end at stage " +
                         std::to_string(s) + " of " + std::to_string(stages));
  }
  cfg.validate();

  const auto pristine = init_signal(tw.size(), cfg.seed);
  SplitComplexBuffer work = pristine;
  const auto prev_edge = edge_of(prev);
  const int prefix_end = prev_edge ? s - span(*prev_edge) : s;
  CacheClobber clobber(prev_edge ? 0 : cfg.clobber_bytes);

  auto prepare = [&] {
    std::copy(pristine.re().begin(), pristine.re().end(), work.re().begin());
    std::copy(pristine.im().begin(), pristine.im().end(), work.im().begin());
    for (int p = 0; p < prefix_end; ++p) radix2_pass(work, p, tw, cfg.path);
    if (prev_edge) {
      run_edge(*prev_edge, work, prefix_end, tw, cfg.path);
    } else {
      clobber.sweep();
    }
  };
  auto body = [&] { run_edge(edge, work, s, tw, cfg.path); };
  return run_protocol(cfg, prepare, body);
}

Timing measure_edge(EdgeType edge, int s, ContextTag prev, std::size_t n, const TimingConfig& cfg) {
  const TwiddleTable tw(n);
  return measure_edge(edge, s, prev, tw, cfg);
}

MeasuredModel measure_all_edges(const DecompositionGraph& graph, std::size_t n,
                                const TimingConfig& cfg) {
  if (stage_count(n) != graph.stages()) {
    throw ConfigError("graph has L = " + std::to_string(graph.stages()) + " but n = " +
                      std::to_string(n));
  }
  const TwiddleTable tw(n);
  MeasuredModel out{CostModel(graph.stages(), graph.context_order(), Provenance::measured), 0};
  for (const auto& e : graph.edges()) {
    const auto& from = graph.nodes()[e.from];
    const auto t = measure_edge(e.type, from.stage, from.prev, tw, cfg);
    const auto key = graph.context_order() == 0 ? std::nullopt : std::optional(from.prev);
    // Fake or coarse clocks can report 0; the model requires positive weights.
    out.model.add(e.type, from.stage, key, std::max(t.ns, 1e-3));
    ++out.measurements;
  }
  return out;
}

}  // namespace fftplan
