#include "fmeval/facet.hpp"

#include "fmeval/text.hpp"

namespace fmeval {

std::string_view facet_name(FacetKind kind) {
  switch (kind) {
    case FacetKind::background: return "background";
    case FacetKind::method: return "method";
    case FacetKind::result: return "result";
    case FacetKind::conclusion: return "conclusion";
  }
  return "";
}

std::optional<FacetKind> facet_from_name(std::string_view name) {
  const std::string lowered = lower_ascii(name);
  for (FacetKind kind : kFacetOrder) {
    if (lowered == facet_name(kind)) return kind;
  }
  return std::nullopt;
}

}  // namespace fmeval
