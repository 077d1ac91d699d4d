#pragma once

// Deterministic tokenization, sentence segmentation and syllable counting.
// All functions here are pure; the counts they produce feed the
// readability and length features.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace doqual {

struct TextStats {
  std::size_t character_count = 0;  // non-whitespace code points
  std::size_t letter_count = 0;     // alphabetic code points
  std::size_t word_count = 0;
  std::size_t sentence_count = 0;   // sentences containing at least one word
  std::size_t complex_word_count = 0;
  std::vector<std::size_t> per_word_syllables;

  friend bool operator==(const TextStats&, const TextStats&) = default;
};

struct SegmentOptions {
  /// Tokens that end in a period but never end a sentence. Matched
  /// case-sensitively against the text immediately before a candidate break.
  std::vector<std::string> abbreviations{"e.g.", "i.e.", "Dr.", "Fig.", "et al."};
  /// Drop URLs (http://, https://, www.) and @mentions before counting.
  bool strip_urls = false;
};

/// Maximal runs of letters and digits, with apostrophes and hyphens kept
/// when they sit between two such characters.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> split_sentences(std::string_view text,
                                         const SegmentOptions& options = {});

/// Vowel-group heuristic. Returns 0 for tokens without letters.
std::size_t count_syllables(std::string_view word);

TextStats text_stats(std::string_view text, const SegmentOptions& options = {});

/// Removes whitespace-delimited URL and @mention chunks.
std::string strip_urls(std::string_view text);

namespace utf8 {

/// Decodes the code point at `pos` and advances it. Invalid bytes decode
/// as U+FFFD and consume one byte.
char32_t next(std::string_view text, std::size_t& pos);

bool is_space(char32_t c);
bool is_letter(char32_t c);
bool is_digit(char32_t c);
inline bool is_alnum(char32_t c) { return is_letter(c) || is_digit(c); }

}  // namespace utf8

}  // namespace doqual
