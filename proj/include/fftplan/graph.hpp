#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fftplan/cost_model.hpp"
#include "fftplan/edge.hpp"

namespace fftplan {

struct GraphNode {
  int stage = 0;
  ContextTag prev = ContextTag::start;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  EdgeType type = EdgeType::R2;
};

/// DAG whose root-to-sink paths are the complete FFT arrangements.
///
/// Order 0 has one node per stage. Order 1 splits each stage by the type of
/// the edge that reached it; only nodes reachable from (0, start) exist.
class DecompositionGraph {
 public:
  DecompositionGraph(int stages, int context_order);

  int stages() const noexcept { return stages_; }
  int context_order() const noexcept { return context_order_; }
  const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  std::size_t root() const noexcept { return 0; }
  std::span<const std::size_t> out_edges(std::size_t node) const { return out_[node]; }
  std::optional<std::size_t> find(GraphNode node) const;

  /// (L + 1) * |tags|: the node count if every (stage, tag) pair existed.
  std::size_t full_product_node_count() const noexcept;

 private:
  std::size_t intern(GraphNode node);

  int stages_;
  int context_order_;
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
};

DecompositionGraph build_graph(int stages, int context_order);

struct Step {
  EdgeType edge = EdgeType::R2;
  int stage = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

/// One root-to-sink path.
struct Arrangement {
  std::vector<Step> steps;
  double cost_ns = 0.0;

  /// Steps laid end to end from stage 0.
  static Arrangement from_edges(std::span<const EdgeType> edges);

  std::vector<EdgeType> edge_types() const;
  std::vector<int> spans() const;
  int total_span() const;
  /// Space-separated edge names, e.g. "R4 R2 R4 R4 F8".
  std::string to_string() const;

  /// Same steps; cost is not compared.
  bool same_path(const Arrangement& other) const { return steps == other.steps; }
};

/// Parse "R4 R2 F8" (spaces, commas or arrows between names).
Arrangement parse_arrangement(std::string_view text);

/// Every root-to-sink path exactly once, in lexicographic edge order.
/// Limited to L <= 20.
std::vector<Arrangement> enumerate_paths(const DecompositionGraph& graph);

inline constexpr int kMaxEnumerationStages = 20;

/// Sum of edge weights along the path, accumulated front to back. The
/// predecessor of the first step is `start`. Throws ModelError when a weight
/// is missing.
double path_cost(const Arrangement& path, const CostModel& costs);

/// Minimum-cost path. Ties go to fewer edges, then to the lexicographically
/// smallest edge sequence (R2 < R4 < R8 < F8 < F16 < F32).
Arrangement shortest_path(const DecompositionGraph& graph, const CostModel& costs);

using NamedArrangement = std::pair<std::string, Arrangement>;

/// The eight fixed comparison arrangements for a 1024-point transform.
std::vector<NamedArrangement> named_arrangements(int stages);

/// Graph description text: one node per line ("s" or "s|prev"), one edge per
/// line ("from -> to [type, ns]"), wrapped in a DOT digraph.
std::string export_graph(const DecompositionGraph& graph, const CostModel* costs = nullptr);

}  // namespace fftplan

namespace fftplan {

/// `count` random root-to-sink paths (repeats possible). Each step picks
/// uniformly among the edges that fit, drawing from std::mt19937_64(seed).
std::vector<Arrangement> sample_paths(int stages, std::size_t count, std::uint64_t seed);

}  // namespace fftplan
