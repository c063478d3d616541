#include "fftplan/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>
#include <sstream>
#include <tuple>

#include "fftplan/errors.hpp"

namespace fftplan {

namespace {

constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

std::size_t slot(int stage, ContextTag tag) {
  return static_cast<std::size_t>(stage) * kContextTagCount + static_cast<std::size_t>(tag);
}

std::string format_ns(double ns) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, ns);
  return std::string(buf, res.ptr);
}

}  // namespace

DecompositionGraph::DecompositionGraph(int stages, int context_order)
    : stages_(stages), context_order_(context_order) {
  if (stages < 1 || stages > 30) {
    throw ConfigError("L must be in [1, 30], got " + std::to_string(stages));
  }
  if (context_order != 0 && context_order != 1) {
    throw ConfigError("context order must be 0 or 1, got " + std::to_string(context_order));
  }

  if (context_order == 0) {
    for (int s = 0; s <= stages; ++s) intern({s, ContextTag::start});
    for (int s = 0; s < stages; ++s) {
      for (EdgeType e : kEdgeTypes) {
        if (!edge_fits(e, s, stages)) continue;
        const std::size_t from = static_cast<std::size_t>(s);
        const std::size_t to = static_cast<std::size_t>(s + span(e));
        out_[from].push_back(edges_.size());
        edges_.push_back({from, to, e});
      }
    }
    return;
  }

  // Mark reachable (stage, tag) pairs, then materialize them in sorted order.
  std::vector<bool> reachable(static_cast<std::size_t>(stages + 1) * kContextTagCount, false);
  reachable[slot(0, ContextTag::start)] = true;
  for (int s = 0; s < stages; ++s) {
    for (std::size_t t = 0; t < kContextTagCount; ++t) {
      if (!reachable[slot(s, static_cast<ContextTag>(t))]) continue;
      for (EdgeType e : kEdgeTypes) {
        if (edge_fits(e, s, stages)) reachable[slot(s + span(e), context_of(e))] = true;
      }
    }
  }
  for (int s = 0; s <= stages; ++s) {
    for (std::size_t t = 0; t < kContextTagCount; ++t) {
      if (reachable[slot(s, static_cast<ContextTag>(t))]) intern({s, static_cast<ContextTag>(t)});
    }
  }
  for (std::size_t from = 0; from < nodes_.size(); ++from) {
    const int s = nodes_[from].stage;
    if (s == stages) continue;
    for (EdgeType e : kEdgeTypes) {
      if (!edge_fits(e, s, stages)) continue;
      const std::size_t to = *find({s + span(e), context_of(e)});
      out_[from].push_back(edges_.size());
      edges_.push_back({from, to, e});
    }
  }
}

std::size_t DecompositionGraph::intern(GraphNode node) {
  nodes_.push_back(node);
  out_.emplace_back();
  return nodes_.size() - 1;
}

std::optional<std::size_t> DecompositionGraph::find(GraphNode node) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t DecompositionGraph::full_product_node_count() const noexcept {
  return static_cast<std::size_t>(stages_ + 1) * kContextTagCount;
}

DecompositionGraph build_graph(int stages, int context_order) {
  return DecompositionGraph(stages, context_order);
}

Arrangement Arrangement::from_edges(std::span<const EdgeType> edges) {
  Arrangement a;
  int s = 0;
  for (EdgeType e : edges) {
    a.steps.push_back({e, s});
    s += span(e);
  }
  return a;
}

std::vector<EdgeType> Arrangement::edge_types() const {
  std::vector<EdgeType> out;
  out.reserve(steps.size());
  for (const auto& st : steps) out.push_back(st.edge);
  return out;
}

std::vector<int> Arrangement::spans() const {
  std::vector<int> out;
  out.reserve(steps.size());
  for (const auto& st : steps) out.push_back(span(st.edge));
  return out;
}

int Arrangement::total_span() const {
  int total = 0;
  for (const auto& st : steps) total += span(st.edge);
  return total;
}

std::string Arrangement::to_string() const {
  std::string out;
  for (const auto& st : steps) {
    if (!out.empty()) out += ' ';
    out += fftplan::to_string(st.edge);
  }
  return out;
}

Arrangement parse_arrangement(std::string_view text) {
  std::vector<EdgeType> edges;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    auto e = parse_edge_type(token);
    if (!e) throw ConfigError("unknown edge type '" + token + "'");
    edges.push_back(*e);
    token.clear();
  };
  for (char c : text) {
    if (c == ' ' || c == ',' || c == '-' || c == '>' || c == '\t') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return Arrangement::from_edges(edges);
}

std::vector<Arrangement> enumerate_paths(const DecompositionGraph& graph) {
  const int stages = graph.stages();
  if (stages > kMaxEnumerationStages) {
    throw ConfigError("path enumeration is limited to L <= " +
                      std::to_string(kMaxEnumerationStages) + ", got " + std::to_string(stages));
  }
  std::vector<Arrangement> out;
  std::vector<EdgeType> prefix;
  auto dfs = [&](auto& self, int s) -> void {
    if (s == stages) {
      out.push_back(Arrangement::from_edges(prefix));
      return;
    }
    for (EdgeType e : kEdgeTypes) {
      if (!edge_fits(e, s, stages)) continue;
      prefix.push_back(e);
      self(self, s + span(e));
      prefix.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

double path_cost(const Arrangement& path, const CostModel& costs) {
  double total = 0.0;
  ContextTag prev = ContextTag::start;
  for (const auto& st : path.steps) {
    const auto w = costs.lookup(st.edge, st.stage, prev);
    if (!w) {
      throw ModelError(ModelErrc::incomplete_model,
                       std::string("no weight for ") + std::string(to_string(st.edge)) + "@" +
                           std::to_string(st.stage) + " after " + std::string(to_string(prev)));
    }
    total += *w;
    prev = context_of(st.edge);
  }
  return total;
}

namespace {

struct Label {
  double cost = 0.0;
  std::vector<EdgeType> seq;

  friend bool operator<(const Label& a, const Label& b) {
    return std::forward_as_tuple(a.cost, a.seq.size(), a.seq) <
           std::forward_as_tuple(b.cost, b.seq.size(), b.seq);
  }
};

}  // namespace

Arrangement shortest_path(const DecompositionGraph& graph, const CostModel& costs) {
  const auto& nodes = graph.nodes();
  const auto& edges = graph.edges();

  std::vector<double> weight(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const auto& from = nodes[e.from];
    const auto w = costs.lookup(e.type, from.stage, from.prev);
    const std::string what = std::string(to_string(e.type)) + "@" + std::to_string(from.stage) +
                             " after " + std::string(to_string(from.prev));
    if (!w) throw ModelError(ModelErrc::incomplete_model, "no weight for " + what);
    if (!(*w >= 0.0) || !std::isfinite(*w)) {
      throw ModelError(ModelErrc::negative_weight, what + " has weight " + std::to_string(*w));
    }
    weight[i] = *w;
  }

  using Item = std::pair<Label, std::size_t>;
  auto later = [](const Item& a, const Item& b) { return b.first < a.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> queue(later);
  std::vector<std::optional<Label>> best(nodes.size());

  best[graph.root()] = Label{};
  queue.push({Label{}, graph.root()});
  while (!queue.empty()) {
    auto [label, u] = queue.top();
    queue.pop();
    if (best[u] && *best[u] < label) continue;  // stale
    if (nodes[u].stage == graph.stages()) {
      Arrangement a = Arrangement::from_edges(label.seq);
      a.cost_ns = label.cost;
      return a;
    }
    for (std::size_t ei : graph.out_edges(u)) {
      const auto& e = edges[ei];
      Label next{label.cost + weight[ei], label.seq};
      next.seq.push_back(e.type);
      if (!best[e.to] || next < *best[e.to]) {
        best[e.to] = next;
        queue.push({std::move(next), e.to});
      }
    }
  }
  throw ConfigError("graph has no path from stage 0 to stage L");
}

std::vector<NamedArrangement> named_arrangements(int stages) {
  if (stages != 10) {
    throw ConfigError("named arrangements are defined for L = 10 only, got " +
                      std::to_string(stages));
  }
  using E = EdgeType;
  auto make = [](std::initializer_list<EdgeType> edges) {
    return Arrangement::from_edges(std::vector<EdgeType>(edges));
  };
  return {
      {"R2 x 10 (pure radix-2)", make({E::R2, E::R2, E::R2, E::R2, E::R2, E::R2, E::R2, E::R2, E::R2, E::R2})},
      {"R4 x 5 (pure radix-4)", make({E::R4, E::R4, E::R4, E::R4, E::R4})},
      {"R8 x 3 + R2 (pure radix-8)", make({E::R8, E::R8, E::R8, E::R2})},
      {"R8,R8,R8,R2 (max radix)", make({E::R8, E::R8, E::R8, E::R2})},
      {"R8,R8,R4,R4", make({E::R8, E::R8, E::R4, E::R4})},
      {"R4,R8,R8,R4 (Haswell optimal)", make({E::R4, E::R8, E::R8, E::R4})},
      {"R2 x 5 + Fused-32", make({E::R2, E::R2, E::R2, E::R2, E::R2, E::F32})},
      {"R4 x 3 + Fused-16", make({E::R4, E::R4, E::R4, E::F16})},
  };
}

std::string export_graph(const DecompositionGraph& graph, const CostModel* costs) {
  auto name = [&](const GraphNode& n) {
    std::string s = std::to_string(n.stage);
    if (graph.context_order() == 1) {
      s += '|';
      s += to_string(n.prev);
    }
    return s;
  };
  std::ostringstream out;
  out << "digraph fft_L" << graph.stages() << "_order" << graph.context_order() << " {\n";
  for (const auto& n : graph.nodes()) out << "  \"" << name(n) << "\";\n";
  for (const auto& e : graph.edges()) {
    const auto& from = graph.nodes()[e.from];
    out << "  \"" << name(from) << "\" -> \"" << name(graph.nodes()[e.to]) << "\" [label=\""
        << to_string(e.type);
    if (costs) {
      if (auto w = costs->lookup(e.type, from.stage, from.prev)) out << ", " << format_ns(*w);
    }
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace fftplan

#include <random>

namespace fftplan {

std::vector<Arrangement> sample_paths(int stages, std::size_t count, std::uint64_t seed) {
  if (stages < 1 || stages > 30) {
    throw ConfigError("L must be in [1, 30], got " + std::to_string(stages));
  }
  std::mt19937_64 gen(seed);
  std::vector<Arrangement> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<EdgeType> edges;
    int s = 0;
    while (s < stages) {
      std::vector<EdgeType> options;
      for (EdgeType e : kEdgeTypes) {
        if (edge_fits(e, s, stages)) options.push_back(e);
      }
      const EdgeType pick = options[gen() % options.size()];
      edges.push_back(pick);
      s += span(pick);
    }
    out.push_back(Arrangement::from_edges(edges));
  }
  return out;
}

}  // namespace fftplan
