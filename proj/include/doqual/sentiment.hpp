#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace doqual {

enum class LexiconRange {
  probability,  // values in [0, 1], neutral 0.5
  polarity,     // values in [-1, 1], neutral 0
};

class SentimentLexicon {
 public:
  explicit SentimentLexicon(LexiconRange range = LexiconRange::probability) : range_(range) {}

  LexiconRange range() const { return range_; }
  double neutral() const { return range_ == LexiconRange::probability ? 0.5 : 0.0; }
  double lower_bound() const { return range_ == LexiconRange::probability ? 0.0 : -1.0; }
  std::size_t size() const { return entries_.size(); }

  /// Case-insensitive (ASCII) lookup.
  std::optional<double> lookup(std::string_view word) const;

  /// Inserts or replaces an entry; returns false when the word was already present.
  /// Throws SchemaError when the value is outside the declared range.
  bool set(std::string_view word, double value);

 private:
  LexiconRange range_;
  std::unordered_map<std::string, double> entries_;
};

/// Parses `#range=prob` / `#range=polarity` followed by `word<TAB>value` rows.
/// Duplicate words keep the last value and emit a warning.
SentimentLexicon parse_lexicon(std::string_view content, const std::string& source = "<memory>");
SentimentLexicon load_lexicon(const std::filesystem::path& path);

/// Mean lexicon value over in-lexicon tokens, or the neutral midpoint.
double tweet_sentiment(const std::vector<std::string>& tokens, const SentimentLexicon& lexicon);

struct ArticleSentiment {
  double average = 0.0;
  double maximum = 0.0;
};

/// Sentence scores follow tweet_sentiment; returns their mean and maximum.
/// Throws UndefinedInputError for an empty sentence list.
ArticleSentiment article_sentiment(const std::vector<std::string>& sentences,
                                   const SentimentLexicon& lexicon);

}  // namespace doqual
