#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "fmeval/facet.hpp"
#include "fmeval/llm_backend.hpp"
#include "fmeval/prompts.hpp"
#include "fmeval/weights.hpp"

namespace fmeval {

struct FacetRating {
  FacetKind kind = FacetKind::background;
  int value = 0;  // 1..scale when not omitted
  int scale = 3;
  std::string raw_response;
  bool omitted = false;       // reference lacks this facet
  bool parse_failed = false;  // floored to 1 after a failed retry
};

FacetRating make_rating(FacetKind kind, int value);
FacetRating omitted_rating(FacetKind kind);

struct FMScore {
  std::array<FacetRating, 4> ratings;
  WeightVector weights;
  double overall = 0.0;
  ShotMode shot_mode = ShotMode::zero_shot;
  std::string judge;
};

// Instruction block for the facet's scale plus the Input1/Input2 pair and a
// trailing "Number:". The generated side may be empty (rubric level 1 covers
// a missing facet); an empty reference throws EmptyReference.
std::string build_comparison_prompt(FacetKind kind, std::string_view reference,
                                    std::string_view generated, ShotMode mode);

// First integer token in the response; tolerates decorations like
// "Number: 3". Throws NoNumber or OutOfRange.
int parse_rating(std::string_view raw, FacetKind kind);

// Weighted normalized mean over non-omitted facets:
//   overall = sum_i (value_i / scale_i) * w_i / sum_i w_i
// evaluated in exact rational arithmetic and rounded once at the end, so the
// maximum is exactly 1 and equal inputs aggregate bit-identically.
double aggregate(const std::array<FacetRating, 4>& ratings, const WeightVector& weights);

struct ScorePairOutcome {
  FMScore score;
  std::vector<CompletionResponse> responses;  // for token accounting
  std::vector<FacetKind> parse_failures;
  bool retried = false;
};

// Rates every reference-present facet through the backend and aggregates.
// Reference-absent facets are marked omitted; rating-parse failures retry
// once past the cache, then floor the facet to 1 and flag it.
ScorePairOutcome score_pair(LlmClient& client, const FacetSet& reference, const FacetSet& generated,
                            const WeightVector& weights, ShotMode mode, const std::string& judge,
                            std::string_view tag = "rate");

}  // namespace fmeval
