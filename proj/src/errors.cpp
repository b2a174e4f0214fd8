#include "fmeval/errors.hpp"

namespace fmeval {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::parse_error: return "ParseError";
    case Errc::schema_error: return "SchemaError";
    case Errc::range_error: return "RangeError";
    case Errc::unknown_system: return "UnknownSystem";
    case Errc::unknown_column: return "UnknownColumn";
    case Errc::unknown_id: return "UnknownId";
    case Errc::duplicate_column: return "DuplicateColumn";
    case Errc::auth_error: return "AuthError";
    case Errc::timeout_error: return "TimeoutError";
    case Errc::rate_limit_exhausted: return "RateLimitExhausted";
    case Errc::transport_error: return "TransportError";
    case Errc::empty_input: return "EmptyInput";
    case Errc::no_json_found: return "NoJsonFound";
    case Errc::all_facets_empty: return "AllFacetsEmpty";
    case Errc::extraction_failed: return "ExtractionFailed";
    case Errc::empty_reference: return "EmptyReference";
    case Errc::no_number: return "NoNumber";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::all_omitted: return "AllOmitted";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::label_range: return "LabelRange";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::missing_column: return "MissingColumn";
    case Errc::io_error: return "IoError";
    case Errc::config_error: return "ConfigError";
  }
  return "Error";
}

Error::Error(Errc code, const std::string& message, std::string context)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      context_(std::move(context)) {}

}  // namespace fmeval
