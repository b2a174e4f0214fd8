#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fmeval {

// Deterministic tokenization used by all lexical metrics: ASCII lowercasing,
// split on whitespace (ASCII plus the common Unicode space code points),
// leading/trailing punctuation stripped from each token. No stemming, no
// stopword removal. "The cat, sat." -> [the, cat, sat].
std::vector<std::string> tokenize(std::string_view text);

std::string lower_ascii(std::string_view text);

// Collapses runs of whitespace to single spaces and trims the ends.
std::string normalize_whitespace(std::string_view text);

// Classic Levenshtein distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

// Minimum edit distance between `needle` and any substring of `haystack`
// (free start and end in the haystack).
std::size_t substring_edit_distance(std::string_view needle, std::string_view haystack);

// Similarity of an extracted segment to the best-matching window of its
// source text, in [0,1]. Both sides are lowercased and whitespace-normalized
// first; 1 means the segment occurs verbatim.
double near_substring_ratio(std::string_view segment, std::string_view source);

bool is_blank(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace fmeval
