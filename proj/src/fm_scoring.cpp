#include "fmeval/fm_scoring.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>

#include "fmeval/errors.hpp"
#include "fmeval/text.hpp"

namespace fmeval {

using rational = boost::multiprecision::cpp_rational;

FacetRating make_rating(FacetKind kind, int value) {
  FacetRating rating;
  rating.kind = kind;
  rating.scale = facet_scale(kind);
  if (value < 1 || value > rating.scale) {
    throw Error(Errc::out_of_range, "rating " + std::to_string(value) + " outside [1," +
                                        std::to_string(rating.scale) + "] for " +
                                        std::string(facet_name(kind)));
  }
  rating.value = value;
  return rating;
}

FacetRating omitted_rating(FacetKind kind) {
  FacetRating rating;
  rating.kind = kind;
  rating.scale = facet_scale(kind);
  rating.omitted = true;
  return rating;
}

std::string build_comparison_prompt(FacetKind kind, std::string_view reference,
                                    std::string_view generated, ShotMode mode) {
  if (is_blank(reference)) {
    throw Error(Errc::empty_reference,
                "reference segment for " + std::string(facet_name(kind)) + " is empty");
  }
  std::string prompt(comparison_instructions(kind, mode));
  prompt += "\n\nInput1: ";
  prompt += reference;
  prompt += "\nInput2: ";
  prompt += generated;
  prompt += "\nNumber:";
  return prompt;
}

int parse_rating(std::string_view raw, FacetKind kind) {
  std::size_t i = 0;
  while (i < raw.size() && !std::isdigit(static_cast<unsigned char>(raw[i]))) ++i;
  if (i == raw.size()) {
    throw Error(Errc::no_number, "no integer in response: '" + normalize_whitespace(raw) + "'");
  }
  long value = 0;
  while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i]))) {
    value = value * 10 + (raw[i] - '0');
    if (value > 1000) break;
    ++i;
  }
  const int scale = facet_scale(kind);
  if (value < 1 || value > scale) {
    throw Error(Errc::out_of_range, "rating " + std::to_string(value) + " outside [1," +
                                        std::to_string(scale) + "] for " +
                                        std::string(facet_name(kind)));
  }
  return static_cast<int>(value);
}

double aggregate(const std::array<FacetRating, 4>& ratings, const WeightVector& weights) {
  weights.validate();
  rational numerator = 0;
  rational weight_sum = 0;
  int present = 0;
  for (const FacetRating& rating : ratings) {
    if (rating.omitted) continue;
    const int scale = facet_scale(rating.kind);
    if (rating.value < 1 || rating.value > scale || rating.scale != scale) {
      throw Error(Errc::out_of_range,
                  "invalid rating for facet " + std::string(facet_name(rating.kind)));
    }
    const rational weight(weights[rating.kind]);  // exact binary rational of the double
    numerator += weight * rating.value / scale;
    weight_sum += weight;
    ++present;
  }
  if (present == 0) throw Error(Errc::all_omitted, "every facet is omitted");
  if (weight_sum == 0) {
    // All present facets carry zero weight; the weighted mean degenerates to
    // the unweighted one.
    rational mean = 0;
    for (const FacetRating& rating : ratings) {
      if (!rating.omitted) mean += rational(rating.value) / rating.scale;
    }
    return (mean / present).convert_to<double>();
  }
  return (numerator / weight_sum).convert_to<double>();
}

ScorePairOutcome score_pair(LlmClient& client, const FacetSet& reference, const FacetSet& generated,
                            const WeightVector& weights, ShotMode mode, const std::string& judge,
                            std::string_view tag) {
  weights.validate();
  if (reference.present_count() == 0) {
    throw Error(Errc::empty_reference, "reference facet set has no facets", std::string(tag));
  }
  ScorePairOutcome outcome;
  outcome.score.weights = weights;
  outcome.score.shot_mode = mode;
  outcome.score.judge = judge;

  for (FacetKind kind : kFacetOrder) {
    const int slot = static_cast<int>(kind);
    if (!reference.has(kind)) {
      outcome.score.ratings[slot] = omitted_rating(kind);
      continue;
    }
    const std::string_view gen_text =
        generated.has(kind) ? std::string_view(generated.text(kind)) : std::string_view();
    CompletionRequest request;
    request.prompt = build_comparison_prompt(kind, reference.text(kind), gen_text, mode);
    request.tag = std::string(tag) + ":" + std::string(facet_name(kind));

    CompletionResponse response = client.complete(request);
    outcome.responses.push_back(response);
    FacetRating rating;
    try {
      rating = make_rating(kind, parse_rating(response.text, kind));
    } catch (const Error& first_error) {
      if (first_error.code() != Errc::no_number && first_error.code() != Errc::out_of_range) throw;
      outcome.retried = true;
      response = client.complete(request, CacheRead::bypass);
      outcome.responses.push_back(response);
      try {
        rating = make_rating(kind, parse_rating(response.text, kind));
      } catch (const Error&) {
        // Floor to the rubric minimum rather than dropping the record, which
        // would bias system means.
        rating = make_rating(kind, 1);
        rating.parse_failed = true;
        outcome.parse_failures.push_back(kind);
      }
    }
    rating.raw_response = response.text;
    outcome.score.ratings[slot] = rating;
  }
  outcome.score.overall = aggregate(outcome.score.ratings, weights);
  return outcome;
}

}  // namespace fmeval
