#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "fmeval/facet.hpp"
#include "fmeval/llm_backend.hpp"

namespace fmeval {

// Extracted segments whose best window in the source falls below this
// edit-similarity are flagged (not rejected) in the run report.
inline constexpr double kNearSubstringThreshold = 0.8;

// Extraction prompt: the fixed instruction block followed by the abstract.
// Throws EmptyInput on a blank abstract.
std::string build_extraction_prompt(std::string_view abstract);

// Total over arbitrary text: finds the first JSON object (tolerating code
// fences and surrounding prose), matches facet keys case-insensitively,
// turns empty values into absent facets. Throws NoJsonFound or
// AllFacetsEmpty; never crashes.
FacetSet parse_extraction_response(std::string_view raw);

struct ExtractionOutcome {
  FacetSet facets;
  // Edit-similarity of each present segment to its best window in the
  // abstract; absent facets read 1.
  std::array<double, 4> fidelity{1.0, 1.0, 1.0, 1.0};
  std::vector<FacetKind> flagged;  // fidelity below kNearSubstringThreshold
  bool retried = false;
  std::vector<CompletionResponse> responses;  // for token accounting
};

// Prompt + completion + parse, with one automatic cache-bypassing retry on a
// parse failure; throws ExtractionFailed when the retry also fails.
ExtractionOutcome extract_facets(LlmClient& client, std::string_view abstract,
                                 std::string_view tag = "extract");

}  // namespace fmeval
