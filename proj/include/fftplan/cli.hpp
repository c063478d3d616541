#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "fftplan/measure.hpp"
#include "fftplan/numerics.hpp"
#include "fftplan/planner.hpp"

namespace fftplan::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kVerificationFailed = 3,
  kIoError = 4,
};

enum class OutputFormat { text, json, csv };

struct CliConfig {
  std::size_t n = 1024;
  int context_order = 1;
  int trials = 50;
  int warmup = 5;
  int runs = 3;
  std::uint64_t seed = 42;
  std::optional<std::string> cost_model_path;  // synthetic mode when set
  std::optional<std::string> save_model_path;
  std::optional<std::string> export_path;
  OutputFormat output = OutputFormat::text;
  bool vector = true;

  /// Throws UsageError on an out-of-range field.
  void validate() const;
  KernelPath kernel_path() const { return vector ? KernelPath::lanes4 : KernelPath::scalar; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Process-level hooks. Tests swap in a fake clock or corrupt the twiddles.
struct Runtime {
  Clock clock = steady_clock_ns();
  std::optional<std::size_t> clobber_bytes;
  std::function<void(TwiddleTable&)> twiddle_hook;
};

/// Shipped cost-model documents addressable by name ("m1-qualitative").
std::optional<std::string_view> builtin_cost_model(std::string_view name);

/// Read a model from a file path, or from the built-in set when no such file
/// exists. Throws IoError when neither matches, ModelError when invalid.
CostModel read_cost_model(const std::string& source);

int cmd_plan(const CliConfig& cfg, std::ostream& out, const Runtime& rt = {});
int cmd_bench_edges(const CliConfig& cfg, std::ostream& out, const Runtime& rt = {});
int cmd_compare(const CliConfig& cfg, std::ostream& out, const Runtime& rt = {});
int cmd_verify(const CliConfig& cfg, std::ostream& out, const Runtime& rt = {});
int cmd_export_graph(const CliConfig& cfg, std::ostream& out, const Runtime& rt = {});

/// Parse arguments, dispatch, and map errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const Runtime& rt = {});

// Report rendering.
std::string render_comparison(const PerfReport& report, OutputFormat format);
std::string render_passes(const std::vector<PassRow>& passes, std::size_t n, OutputFormat format);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

}  // namespace fftplan::cli
