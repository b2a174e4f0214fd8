#pragma once

#include <map>
#include <string>
#include <string_view>

#include "fmeval/facet.hpp"

namespace fmeval {

enum class ShotMode { zero_shot, few_shot };

std::string_view shot_mode_name(ShotMode mode);

// Instruction block of the facet-extraction prompt (the abstract is appended
// separately).
std::string_view extraction_instructions();

// Full instruction block for rating one facet pair: header, rubric (3-level
// for background/conclusion, 4-level for method/result), "Only return the
// number.", and in few-shot mode the worked examples.
std::string_view comparison_instructions(FacetKind kind, ShotMode mode);

// sha256 per template, embedded in report provenance so a change to any
// prompt text is visible in every artifact it produced.
std::map<std::string, std::string> prompt_digests();

}  // namespace fmeval
