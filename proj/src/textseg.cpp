#include "doqual/textseg.hpp"

#include <algorithm>
#include <cctype>

namespace doqual {

namespace utf8 {

char32_t next(std::string_view text, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t len;
  char32_t cp;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > text.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_digit(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= 0x0660 && c <= 0x0669) ||
         (c >= 0x06F0 && c <= 0x06F9) || (c >= 0x0966 && c <= 0x096F) ||
         (c >= 0xFF10 && c <= 0xFF19);
}

bool is_letter(char32_t c) {
  if (c < 0x80) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
  }
  if (is_digit(c)) return false;
  // Everything outside ASCII is a letter unless it falls in a block of
  // punctuation, symbols, controls or emoji.
  if (c <= 0xBF) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;
  if (c >= 0x2E00 && c <= 0x2E7F) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xD800 && c <= 0xDFFF) return false;
  if (c >= 0xFE00 && c <= 0xFE0F) return false;
  if (c >= 0xFE30 && c <= 0xFE6F) return false;
  if (c == 0xFEFF) return false;
  if (c >= 0xFF00 && c <= 0xFF20) return false;
  if (c >= 0xFF3B && c <= 0xFF40) return false;
  if (c >= 0xFF5B && c <= 0xFF65) return false;
  if (c >= 0xFFF0 && c <= 0xFFFF) return false;
  if (c >= 0x1F000 && c <= 0x1FAFF) return false;
  if (c >= 0xE0000 && c <= 0xE007F) return false;
  return true;
}

}  // namespace utf8

namespace {

bool is_joiner(char32_t c) {
  return c == U'\'' || c == 0x2019 || c == U'-' || c == 0x2010 || c == 0x2011;
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) { return c == ')' || c == ']' || c == '"' || c == '\''; }

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size()) {
    std::size_t p = b;
    if (!utf8::is_space(utf8::next(s, p))) break;
    b = p;
  }
  std::size_t e = s.size();
  while (e > b) {
    // Step back to the start of the previous code point.
    std::size_t start = e - 1;
    while (start > b && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
    std::size_t p = start;
    if (!utf8::is_space(utf8::next(s, p))) break;
    e = start;
  }
  return s.substr(b, e - b);
}

bool ends_with_abbreviation(std::string_view sentence, const std::vector<std::string>& abbreviations) {
  for (const auto& abbr : abbreviations) {
    if (abbr.empty() || sentence.size() < abbr.size()) continue;
    if (sentence.substr(sentence.size() - abbr.size()) != abbr) continue;
    const std::size_t before = sentence.size() - abbr.size();
    if (before == 0) return true;
    const auto prev = static_cast<unsigned char>(sentence[before - 1]);
    if (prev >= 0x80 || !std::isalnum(prev)) return true;
  }
  return false;
}

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t c = utf8::next(text, pos);
    if (utf8::is_alnum(c)) {
      current.append(text.substr(start, pos - start));
      continue;
    }
    if (is_joiner(c) && !current.empty() && pos < text.size()) {
      std::size_t peek = pos;
      if (utf8::is_alnum(utf8::next(text, peek))) {
        current.append(text.substr(start, pos - start));
        continue;
      }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text, const SegmentOptions& options) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  auto emit = [&](std::size_t end) {
    const auto s = trim(text.substr(start, end - start));
    if (!s.empty()) sentences.emplace_back(s);
    start = end;
  };
  while (i < text.size()) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_terminal(text[j])) ++j;
    const bool single_period = (j == i + 1 && text[i] == '.');
    const std::size_t run_end = j;
    while (j < text.size() && is_closer(text[j])) ++j;
    bool boundary = (j == text.size());
    if (!boundary) {
      std::size_t p = j;
      boundary = utf8::is_space(utf8::next(text, p));
    }
    if (boundary && single_period &&
        ends_with_abbreviation(text.substr(start, run_end - start), options.abbreviations)) {
      boundary = false;
    }
    if (boundary) emit(j);
    i = j;
  }
  emit(text.size());
  return sentences;
}

std::size_t count_syllables(std::string_view word) {
  std::string lower;
  bool has_letter = false;
  std::size_t pos = 0;
  while (pos < word.size()) {
    const char32_t c = utf8::next(word, pos);
    if (!utf8::is_letter(c)) {
      lower.push_back(' ');
      continue;
    }
    has_letter = true;
    if (c < 0x80) {
      lower.push_back(static_cast<char>(std::tolower(static_cast<int>(c))));
    } else {
      // Non-ASCII letters act as consonants; one placeholder per code point.
      lower.push_back('#');
    }
  }
  if (!has_letter) return 0;

  std::size_t groups = 0;
  bool in_group = false;
  for (char c : lower) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }

  auto is_consonant = [](char c) { return c != ' ' && !is_vowel(c); };
  const std::size_t n = lower.size();
  if (n >= 2 && lower[n - 1] == 'e' && is_consonant(lower[n - 2])) {
    const bool consonant_le = lower[n - 2] == 'l' && n >= 3 && is_consonant(lower[n - 3]);
    if (!consonant_le && groups > 0) --groups;
  }
  return std::max<std::size_t>(groups, 1);
}

std::string strip_urls(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t p = pos;
    if (utf8::is_space(utf8::next(text, p))) {
      pos = p;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size()) {
      std::size_t q = end;
      if (utf8::is_space(utf8::next(text, q))) break;
      end = q;
    }
    const auto chunk = text.substr(pos, end - pos);
    std::string lower(chunk.substr(0, std::min<std::size_t>(chunk.size(), 8)));
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const bool url = lower.starts_with("http://") || lower.starts_with("https://") ||
                     lower.starts_with("www.");
    const bool mention = chunk.size() > 1 && chunk.front() == '@';
    if (!url && !mention) {
      if (!out.empty()) out.push_back(' ');
      out.append(chunk);
    }
    pos = end;
  }
  return out;
}

TextStats text_stats(std::string_view raw, const SegmentOptions& options) {
  std::string stripped;
  std::string_view text = raw;
  if (options.strip_urls) {
    stripped = strip_urls(raw);
    text = stripped;
  }

  TextStats stats;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t c = utf8::next(text, pos);
    if (utf8::is_space(c)) continue;
    ++stats.character_count;
    if (utf8::is_letter(c)) ++stats.letter_count;
  }

  const auto tokens = tokenize(text);
  stats.word_count = tokens.size();
  stats.per_word_syllables.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto s = count_syllables(t);
    stats.per_word_syllables.push_back(s);
    if (s >= 3) ++stats.complex_word_count;
  }

  for (const auto& sentence : split_sentences(text, options)) {
    if (!tokenize(sentence).empty()) ++stats.sentence_count;
  }
  return stats;
}

}  // namespace doqual
