#include "fftplan/edge.hpp"

namespace fftplan {

namespace {
constexpr std::array<std::string_view, 6> kEdgeNames = {"R2", "R4", "R8", "F8", "F16", "F32"};
}

std::string_view to_string(EdgeType e) noexcept { return kEdgeNames[static_cast<std::size_t>(e)]; }

std::optional<EdgeType> parse_edge_type(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kEdgeNames.size(); ++i) {
    if (kEdgeNames[i] == name) return static_cast<EdgeType>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ContextTag t) noexcept {
  if (t == ContextTag::start) return "start";
  return to_string(*edge_of(t));
}

std::optional<ContextTag> parse_context_tag(std::string_view name) noexcept {
  if (name == "start") return ContextTag::start;
  if (auto e = parse_edge_type(name)) return context_of(*e);
  return std::nullopt;
}

}  // namespace fftplan
