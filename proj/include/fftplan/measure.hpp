#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fftplan/cost_model.hpp"
#include "fftplan/edge.hpp"
#include "fftplan/graph.hpp"
#include "fftplan/kernels.hpp"

namespace fftplan {

/// Monotonic time source in nanoseconds.
using Clock = std::function<std::int64_t()>;

Clock steady_clock_ns();

/// Scratch size swept before a measurement that has no predecessor:
/// 4x the last-level cache, capped at 64 MiB.
std::size_t default_clobber_bytes();

struct TimingConfig {
  int trials = 50;
  int warmup = 5;
  int runs = 3;
  std::uint64_t seed = 42;
  Clock clock = steady_clock_ns();
  std::size_t clobber_bytes = default_clobber_bytes();
  KernelPath path = KernelPath::lanes4;

  /// Throws ConfigError unless trials >= 1, warmup >= 0, runs >= 1.
  void validate() const;
};

struct Timing {
  double ns = 0.0;          // mean of the per-run medians
  double run_min_ns = 0.0;  // smallest per-run median
  double run_max_ns = 0.0;  // largest per-run median
};

/// Middle order statistic; for even counts the mean of the two middle values.
double median(std::vector<double> values);

/// The timing protocol. Each run executes warmup + trials iterations of
/// `prepare` (untimed) followed by `body`, read between exactly two clock
/// calls. Warmup durations are discarded; the run reports the median of the
/// rest. The result averages the run medians.
Timing run_protocol(const TimingConfig& cfg, const std::function<void()>& prepare,
                    const std::function<void()>& body);

/// Time one edge at stage s of an n-point transform, conditioned on `prev`.
///
/// Per trial: the buffer is rewritten from cfg.seed and advanced with untimed
/// radix-2 passes to where the predecessor starts. With prev == start a
/// cache-clobbering sweep follows; otherwise the predecessor edge runs
/// untimed. Then the edge under test is timed.
Timing measure_edge(EdgeType edge, int s, ContextTag prev, std::size_t n, const TimingConfig& cfg);
Timing measure_edge(EdgeType edge, int s, ContextTag prev, const TwiddleTable& tw,
                    const TimingConfig& cfg);

struct MeasuredModel {
  CostModel model;
  std::size_t measurements = 0;
};

/// One measurement per graph edge. Order-0 graphs produce wildcard entries
/// measured after `start`; order-1 graphs condition on each edge's source tag.
MeasuredModel measure_all_edges(const DecompositionGraph& graph, std::size_t n,
                                const TimingConfig& cfg);

}  // namespace fftplan
