#pragma once

#include <stdexcept>
#include <string>

namespace fftplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transform size is not a supported power of two.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Two sequences that must agree in length (or span total) do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A pass would advance the decomposition past stage L.
class StageOverflowError : public Error {
 public:
  using Error::Error;
};

/// An edge was requested at a stage where it cannot be placed
/// (non-terminal fused block, predecessor that cannot end at the stage).
class PlacementError : public Error {
 public:
  using Error::Error;
};

/// Invalid graph or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An arrangement cannot be compiled into an executable plan.
class PlanError : public Error {
 public:
  using Error::Error;
};

enum class ModelErrc {
  parse_error,
  missing_field,
  wrong_type,
  bad_stage_count,
  bad_context_order,
  unknown_edge,
  unknown_prev,
  bad_stage,
  non_positive_weight,
  duplicate_entry,
  prev_order_mismatch,
  infeasible_edge,
  infeasible_context,
  incomplete_model,
  negative_weight,
};

const char* to_string(ModelErrc code);

/// Cost-model validation or lookup failure. `code()` identifies the rule that
/// was violated so callers can tell rejections apart.
class ModelError : public Error {
 public:
  ModelError(ModelErrc code, const std::string& what)
      : Error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ModelErrc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ModelErrc code_;
  std::string detail_;
};

}  // namespace fftplan
