#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fftplan/graph.hpp"
#include "fftplan/kernels.hpp"
#include "fftplan/measure.hpp"
#include "fftplan/numerics.hpp"

namespace fftplan {

/// An arrangement bound to a transform size: kernel invocations followed by
/// the output reordering.
struct Plan {
  std::size_t n = 0;
  std::vector<Step> invocations;
  std::vector<std::uint32_t> permutation;
  Arrangement source;
  std::shared_ptr<const TwiddleTable> twiddles;
};

Plan compile_plan(const Arrangement& arrangement, std::size_t n);
Plan compile_plan(const Arrangement& arrangement, std::shared_ptr<const TwiddleTable> twiddles);

/// Natural-order forward DFT of `input`.
SplitComplexBuffer execute_plan(const Plan& plan, const SplitComplexBuffer& input,
                                KernelPath path = KernelPath::scalar);

/// Runs the passes in place on `work`, then writes the reordered spectrum to
/// `out`. No allocation.
void execute_plan_into(const Plan& plan, SplitComplexBuffer& work, SplitComplexBuffer& out,
                       KernelPath path = KernelPath::scalar);

inline constexpr std::size_t kFullOracleLimit = 4096;
inline constexpr std::size_t kSpotBins = 256;
inline constexpr double kVerifyTolerance = 1e-5;

/// Double-precision reference spectrum of one input. Sizes above
/// kFullOracleLimit keep only kSpotBins spread-out bins.
class SpectrumOracle {
 public:
  explicit SpectrumOracle(const SplitComplexBuffer& input);

  /// Relative L2 error of `output` over the retained bins.
  double error(const SplitComplexBuffer& output) const;

 private:
  std::vector<std::size_t> bins_;  // empty: full spectrum
  std::vector<std::complex<double>> expected_;
};

/// Relative L2 error of the plan's output against the oracle.
double verify_plan(const Plan& plan, const SplitComplexBuffer& input,
                   KernelPath path = KernelPath::scalar);

/// 5 n log2(n) / time_ns. FLOPs per nanosecond is GFLOPS.
double gflops(double time_ns, std::size_t n);

/// GFLOPS of a pass covering `span` stages, charged 5 n span FLOPs.
double pass_gflops(double time_ns, std::size_t n, int span);

struct ComparisonRow {
  std::string name;
  Arrangement arrangement;
  double time_ns = 0.0;
  double gflops = 0.0;
  double percent_of_best = 0.0;
  std::optional<double> predicted_ns;
};

struct PassRow {
  std::string label;                  // "1".."L" for radix-2 passes, "F8" etc.
  int stage = 0;                      // stages already computed
  int span = 1;
  std::optional<std::size_t> stride;  // radix-2 rows only
  double time_ns = 0.0;
  double gflops = 0.0;
};

struct PerfReport {
  std::size_t n = 0;
  std::vector<ComparisonRow> rows;
  std::vector<PassRow> passes;
};

/// Observed end-to-end time of a plan in ns.
using PlanTimer = std::function<double(const Plan&)>;

/// Times the whole plan (passes plus reordering) under the timing protocol.
/// The input is rewritten from cfg.seed before every trial.
PlanTimer protocol_timer(const TimingConfig& cfg);

/// Reports the model's predicted path cost without running anything.
PlanTimer model_timer(const CostModel& model);

/// Fill gflops and percent_of_best from time_ns.
void finalize_rows(std::vector<ComparisonRow>& rows, std::size_t n);

/// Time every arrangement and build the comparison table. When `predictor`
/// is given, each row also carries the sum of its edge weights.
PerfReport compare_arrangements(const std::vector<NamedArrangement>& arrangements, std::size_t n,
                                const PlanTimer& timer, const CostModel* predictor = nullptr);
PerfReport compare_arrangements(const std::vector<NamedArrangement>& arrangements, std::size_t n,
                                const TimingConfig& cfg, const CostModel* predictor = nullptr);

/// The comparison lineup: the fixed named arrangements (L = 10 only; pure
/// radix-2 otherwise) followed by the context-free and the context-aware
/// shortest paths.
std::vector<NamedArrangement> comparison_lineup(int stages, const CostModel& context_free,
                                                const CostModel& context_aware);

/// Per-pass profile: every radix-2 pass (stride n / 2^(s+1)) and every fused
/// block that fits, each measured after `start`.
std::vector<PassRow> per_pass_profile(std::size_t n, const TimingConfig& cfg);

}  // namespace fftplan
