#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace fmeval {

// The four rhetorical components of a scientific abstract, always handled in
// this order.
enum class FacetKind { background = 0, method = 1, result = 2, conclusion = 3 };

inline constexpr std::array<FacetKind, 4> kFacetOrder = {
    FacetKind::background, FacetKind::method, FacetKind::result, FacetKind::conclusion};

// Rating scale per facet: 3-point for background/conclusion, 4-point for
// method/result.
constexpr int facet_scale(FacetKind kind) {
  return (kind == FacetKind::method || kind == FacetKind::result) ? 4 : 3;
}

std::string_view facet_name(FacetKind kind);

// Parses "background"/"method"/"result"/"conclusion", case-insensitively.
std::optional<FacetKind> facet_from_name(std::string_view name);

enum class FacetSource { human_annotation, llm_extraction };

// Facet segments of one abstract. A facet may be absent (the abstract simply
// has no such component); present segments are non-blank text.
struct FacetSet {
  std::array<std::optional<std::string>, 4> segments;
  FacetSource source = FacetSource::llm_extraction;

  bool has(FacetKind kind) const { return segments[static_cast<int>(kind)].has_value(); }

  const std::string& text(FacetKind kind) const { return *segments[static_cast<int>(kind)]; }

  void set(FacetKind kind, std::string segment) {
    segments[static_cast<int>(kind)] = std::move(segment);
  }

  int present_count() const {
    int n = 0;
    for (const auto& s : segments) n += s.has_value() ? 1 : 0;
    return n;
  }
};

}  // namespace fmeval
