#include "fmeval/facet_extraction.hpp"

#include <nlohmann/json.hpp>

#include "fmeval/errors.hpp"
#include "fmeval/prompts.hpp"
#include "fmeval/text.hpp"

namespace fmeval {

using nlohmann::json;

namespace {

// Candidate end of a JSON object starting at `begin`, honoring strings and
// escapes; npos when unbalanced.
std::size_t matching_brace(std::string_view raw, std::size_t begin) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = begin; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

json first_json_object(std::string_view raw) {
  std::size_t from = 0;
  while (true) {
    const std::size_t begin = raw.find('{', from);
    if (begin == std::string_view::npos) break;
    const std::size_t end = matching_brace(raw, begin);
    if (end == std::string_view::npos) break;
    json parsed = json::parse(raw.substr(begin, end - begin + 1), nullptr, false);
    if (parsed.is_object()) return parsed;
    from = begin + 1;
  }
  throw Error(Errc::no_json_found, "no JSON object in model response");
}

}  // namespace

std::string build_extraction_prompt(std::string_view abstract) {
  if (is_blank(abstract)) {
    throw Error(Errc::empty_input, "cannot extract facets from an empty abstract");
  }
  std::string prompt(extraction_instructions());
  prompt += "\n\nInput: ";
  prompt += abstract;
  return prompt;
}

FacetSet parse_extraction_response(std::string_view raw) {
  const json object = first_json_object(raw);
  FacetSet facets;
  facets.source = FacetSource::llm_extraction;
  for (const auto& [key, value] : object.items()) {
    const auto kind = facet_from_name(key);
    if (!kind || facets.has(*kind)) continue;
    if (!value.is_string()) continue;
    const auto text = value.get<std::string>();
    if (!is_blank(text)) facets.set(*kind, text);
  }
  if (facets.present_count() == 0) {
    throw Error(Errc::all_facets_empty, "extraction returned no facet segments");
  }
  return facets;
}

ExtractionOutcome extract_facets(LlmClient& client, std::string_view abstract,
                                 std::string_view tag) {
  CompletionRequest request;
  request.prompt = build_extraction_prompt(abstract);
  request.tag = std::string(tag);

  ExtractionOutcome outcome;
  CompletionResponse response = client.complete(request);
  outcome.responses.push_back(response);
  try {
    outcome.facets = parse_extraction_response(response.text);
  } catch (const Error& first_error) {
    if (first_error.code() != Errc::no_json_found && first_error.code() != Errc::all_facets_empty) {
      throw;
    }
    // One retry past the cache; a live backend may answer differently, a
    // replay backend fails here and the record lands in the failure list.
    outcome.retried = true;
    response = client.complete(request, CacheRead::bypass);
    outcome.responses.push_back(response);
    try {
      outcome.facets = parse_extraction_response(response.text);
    } catch (const Error&) {
      throw Error(Errc::extraction_failed,
                  "extraction unparseable after retry: " + std::string(first_error.what()),
                  std::string(tag));
    }
  }
  for (FacetKind kind : kFacetOrder) {
    if (!outcome.facets.has(kind)) continue;
    const double ratio = near_substring_ratio(outcome.facets.text(kind), abstract);
    outcome.fidelity[static_cast<int>(kind)] = ratio;
    if (ratio < kNearSubstringThreshold) outcome.flagged.push_back(kind);
  }
  return outcome;
}

}  // namespace fmeval
