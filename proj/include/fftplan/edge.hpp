#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace fftplan {

/// Kinds of work that advance the decomposition. The declaration order is the
/// tie-break order used by the search (R2 < R4 < R8 < F8 < F16 < F32).
enum class EdgeType : std::uint8_t { R2, R4, R8, F8, F16, F32 };

inline constexpr std::array<EdgeType, 6> kEdgeTypes = {EdgeType::R2, EdgeType::R4, EdgeType::R8,
                                                       EdgeType::F8, EdgeType::F16, EdgeType::F32};

/// Stages advanced by one edge.
constexpr int span(EdgeType e) noexcept {
  switch (e) {
    case EdgeType::R2: return 1;
    case EdgeType::R4: return 2;
    case EdgeType::R8: return 3;
    case EdgeType::F8: return 3;
    case EdgeType::F16: return 4;
    case EdgeType::F32: return 5;
  }
  return 0;
}

constexpr bool is_fused(EdgeType e) noexcept {
  return e == EdgeType::F8 || e == EdgeType::F16 || e == EdgeType::F32;
}

/// Points per chunk for a fused block (8, 16, 32); 0 for radix passes.
constexpr int block_size(EdgeType e) noexcept { return is_fused(e) ? 1 << span(e) : 0; }

/// True when `e` can start at stage s of an L-stage transform. Fused blocks
/// are terminal: they must finish exactly at L.
constexpr bool edge_fits(EdgeType e, int s, int stages) noexcept {
  if (s < 0) return false;
  return is_fused(e) ? s + span(e) == stages : s + span(e) <= stages;
}

std::string_view to_string(EdgeType e) noexcept;
std::optional<EdgeType> parse_edge_type(std::string_view name) noexcept;

/// Type of the edge that produced a node; `start` marks the root.
enum class ContextTag : std::uint8_t { start, R2, R4, R8, F8, F16, F32 };

inline constexpr std::size_t kContextTagCount = 7;

constexpr ContextTag context_of(EdgeType e) noexcept {
  return static_cast<ContextTag>(static_cast<std::uint8_t>(e) + 1);
}

constexpr std::optional<EdgeType> edge_of(ContextTag t) noexcept {
  if (t == ContextTag::start) return std::nullopt;
  return static_cast<EdgeType>(static_cast<std::uint8_t>(t) - 1);
}

std::string_view to_string(ContextTag t) noexcept;
std::optional<ContextTag> parse_context_tag(std::string_view name) noexcept;

/// True when an edge of type `prev` can be the one that ended at stage s.
/// `start` is always acceptable: it denotes a measurement with no predecessor.
constexpr bool context_fits(ContextTag prev, int s, int stages) noexcept {
  const auto e = edge_of(prev);
  if (!e) return s >= 0 && s <= stages;
  // The predecessor ends at s and something still follows it, so s < L.
  return s < stages && edge_fits(*e, s - span(*e), stages);
}

}  // namespace fftplan
