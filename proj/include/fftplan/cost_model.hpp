#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "fftplan/edge.hpp"

namespace fftplan {

enum class Provenance { measured, synthetic };

/// Key of one edge weight. `prev` is empty for the context-free wildcard.
/// Ordering is (stage, edge, prev), the serialization order.
struct CostKey {
  int stage = 0;
  EdgeType edge = EdgeType::R2;
  std::optional<ContextTag> prev;

  friend auto operator<=>(const CostKey&, const CostKey&) = default;
};

/// Edge weights in nanoseconds for one transform size.
///
/// A context-order-0 model holds only wildcard entries and answers every
/// lookup regardless of predecessor. A context-order-1 model holds one entry
/// per (edge, stage, predecessor) and has no fallback.
class CostModel {
 public:
  CostModel(int stages, int context_order, Provenance provenance = Provenance::synthetic);

  int stages() const noexcept { return stages_; }
  int context_order() const noexcept { return context_order_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<CostKey, double>& entries() const noexcept { return entries_; }

  /// Validates the key against the model shape and rejects duplicates.
  void add(EdgeType edge, int stage, std::optional<ContextTag> prev, double ns);

  std::optional<double> lookup(EdgeType edge, int stage, ContextTag prev) const;

  friend bool operator==(const CostModel&, const CostModel&) = default;

 private:
  int stages_;
  int context_order_;
  Provenance provenance_;
  std::map<CostKey, double> entries_;
};

/// Context-free view of a model: each (edge, stage) weight is the mean over
/// its predecessor contexts. Order-0 models are returned unchanged.
CostModel collapse_context(const CostModel& model);

/// Parse and validate a cost-model document (JSON). Throws ModelError.
CostModel load_cost_model(std::string_view document);

/// Canonical document: entries ascending by (stage, edge, prev).
std::string save_cost_model(const CostModel& model);

std::string_view to_string(Provenance p) noexcept;

}  // namespace fftplan
