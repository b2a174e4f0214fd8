#include "fmeval/text.hpp"

#include <doctest.h>

using namespace fmeval;

TEST_CASE("tokenize lowercases, splits and strips edge punctuation") {
  CHECK(tokenize("The cat, sat.") == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("25-hydroxy VitD") == std::vector<std::string>{"25-hydroxy", "vitd"});
  CHECK(tokenize("(p<0.05)") == std::vector<std::string>{"p<0.05"});
  CHECK(tokenize("  spaced\tout\nwords ") == std::vector<std::string>{"spaced", "out", "words"});
  CHECK(tokenize("...") == std::vector<std::string>{});
}

TEST_CASE("tokenize treats common unicode spaces as separators") {
  // U+00A0 no-break space and U+2003 em space
  CHECK(tokenize("a\xC2\xA0"
                 "b\xE2\x80\x83"
                 "c") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("edit distance basics") {
  CHECK(edit_distance("", "") == 0);
  CHECK(edit_distance("abc", "abc") == 0);
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("abc", "") == 3);
}

TEST_CASE("substring edit distance allows free start and end") {
  CHECK(substring_edit_distance("cat", "the cat sat") == 0);
  CHECK(substring_edit_distance("cot", "the cat sat") == 1);
  CHECK(substring_edit_distance("xyz", "abc") == 3);
}

TEST_CASE("near_substring_ratio flags fabricated segments") {
  const std::string source = "BACKGROUND: Vitamin D deficiency is common. METHODS: We ran a trial.";
  CHECK(near_substring_ratio("Vitamin D deficiency is common.", source) == 1.0);
  CHECK(near_substring_ratio("vitamin d DEFICIENCY is common", source) == 1.0);  // normalized
  CHECK(near_substring_ratio("Entirely fabricated conclusion about zinc levels", source) < 0.8);
}

TEST_CASE("normalize_whitespace collapses runs and trims") {
  CHECK(normalize_whitespace("  a \t b\n\nc ") == "a b c");
  CHECK(normalize_whitespace("") == "");
}
