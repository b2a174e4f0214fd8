#include "fmeval/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>

namespace fmeval {
namespace {

bool is_unicode_space(uint32_t cp) {
  switch (cp) {
    case 0x00A0:  // no-break space
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return (cp >= 0x2000 && cp <= 0x200A) || (cp < 0x80 && std::isspace(static_cast<int>(cp)));
  }
}

// Decodes one UTF-8 code point starting at i; malformed bytes are passed
// through as single code units so tokenization stays total.
uint32_t decode_utf8(std::string_view s, std::size_t i, std::size_t* len) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  *len = 1;
  if (b0 < 0x80) return b0;
  std::size_t need = 0;
  uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
  } else {
    return b0;
  }
  if (i + need >= s.size()) return b0;
  for (std::size_t k = 1; k <= need; ++k) {
    const auto bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0) != 0x80) return b0;
    cp = (cp << 6) | (bk & 0x3F);
  }
  *len = need + 1;
  return cp;
}

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::string strip_edge_punct(std::string_view token) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && is_ascii_punct(token[begin])) ++begin;
  while (end > begin && is_ascii_punct(token[end - 1])) --end;
  return std::string(token.substr(begin, end - begin));
}

}  // namespace

std::string lower_ascii(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 1;
    const uint32_t cp = decode_utf8(text, i, &len);
    if (is_unicode_space(cp)) {
      if (!current.empty()) {
        std::string stripped = strip_edge_punct(current);
        if (!stripped.empty()) tokens.push_back(lower_ascii(stripped));
        current.clear();
      }
    } else {
      current.append(text.substr(i, len));
    }
    i += len;
  }
  if (!current.empty()) {
    std::string stripped = strip_edge_punct(current);
    if (!stripped.empty()) tokens.push_back(lower_ascii(stripped));
  }
  return tokens;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;  // trims leading whitespace
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 1;
    const uint32_t cp = decode_utf8(text, i, &len);
    if (is_unicode_space(cp)) {
      if (!in_space) {
        out.push_back(' ');
        in_space = true;
      }
    } else {
      out.append(text.substr(i, len));
      in_space = false;
    }
    i += len;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t substring_edit_distance(std::string_view needle, std::string_view haystack) {
  if (needle.empty()) return 0;
  // Row j tracks the cheapest alignment of needle[0..i) ending anywhere in the
  // haystack: the first row is all zeros (free start) and we take the row
  // minimum at the end (free end).
  std::vector<std::size_t> row(haystack.size() + 1, 0);
  for (std::size_t i = 1; i <= needle.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= haystack.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = (needle[i - 1] == haystack[j - 1]) ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return *std::min_element(row.begin(), row.end());
}

double near_substring_ratio(std::string_view segment, std::string_view source) {
  const std::string seg = lower_ascii(normalize_whitespace(segment));
  const std::string src = lower_ascii(normalize_whitespace(source));
  if (seg.empty()) return 1.0;
  const std::size_t dist = substring_edit_distance(seg, src);
  return 1.0 - static_cast<double>(dist) / static_cast<double>(seg.size());
}

bool is_blank(std::string_view text) {
  return normalize_whitespace(text).empty();
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(start));
      break;
    }
    parts.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace fmeval
