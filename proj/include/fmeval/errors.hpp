#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fmeval {

// Every failure mode the library reports. Corpus loading, backend transport,
// prompt parsing and the statistics all throw Error with one of these codes so
// callers can dispatch without string matching.
enum class Errc {
  // corpus
  parse_error,
  schema_error,
  range_error,
  unknown_system,
  unknown_column,
  unknown_id,
  duplicate_column,
  // llm backend
  auth_error,
  timeout_error,
  rate_limit_exhausted,
  transport_error,
  // facet extraction
  empty_input,
  no_json_found,
  all_facets_empty,
  extraction_failed,
  // fm scoring
  empty_reference,
  no_number,
  out_of_range,
  all_omitted,
  // meta evaluation
  length_mismatch,
  degenerate_input,
  label_range,
  zero_variance,
  rank_deficient,
  missing_column,
  // cli / io
  io_error,
  config_error,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::string context = {});

  Errc code() const { return code_; }

  // Free-form attribution: request tag, field name, record id, ...
  const std::string& context() const { return context_; }

 private:
  Errc code_;
  std::string context_;
};

}  // namespace fmeval
