#include "doqual/readability.hpp"

#include "doqual/error.hpp"

namespace doqual {
namespace {

void require_words(const TextStats& stats, const char* index) {
  if (stats.word_count == 0) {
    throw UndefinedInputError(std::string(index) + " is undefined for a text with no words");
  }
}

void require_sentences(const TextStats& stats, const char* index) {
  require_words(stats, index);
  if (stats.sentence_count == 0) {
    throw UndefinedInputError(std::string(index) + " is undefined for a text with no sentences");
  }
}

}  // namespace

double coleman_liau(const TextStats& stats) {
  require_words(stats, "Coleman-Liau index");
  const double words = static_cast<double>(stats.word_count);
  const double letters_per_100 = 100.0 * static_cast<double>(stats.letter_count) / words;
  const double sentences_per_100 = 100.0 * static_cast<double>(stats.sentence_count) / words;
  return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.9;
}

double ari(const TextStats& stats) {
  require_sentences(stats, "Automated Readability Index");
  const double words = static_cast<double>(stats.word_count);
  return 4.71 * (static_cast<double>(stats.character_count) / words) +
         0.5 * (words / static_cast<double>(stats.sentence_count)) - 21.43;
}

double gunning_fog(const TextStats& stats) {
  require_sentences(stats, "Gunning fog index");
  const double words = static_cast<double>(stats.word_count);
  return 0.4 * (words / static_cast<double>(stats.sentence_count) +
                100.0 * static_cast<double>(stats.complex_word_count) / words);
}

ReadabilityScores readability_scores(const TextStats& stats) {
  return {coleman_liau(stats), ari(stats), gunning_fog(stats)};
}

std::vector<double> readability_features(const TextStats& stats, DocumentKind kind) {
  if (kind == DocumentKind::tweet) return {coleman_liau(stats)};
  return {coleman_liau(stats), ari(stats), gunning_fog(stats)};
}

std::vector<double> length_features(const TextStats& stats, DocumentKind kind) {
  if (kind == DocumentKind::tweet) return {static_cast<double>(stats.word_count)};
  return {static_cast<double>(stats.sentence_count), static_cast<double>(stats.word_count),
          static_cast<double>(stats.character_count)};
}

}  // namespace doqual
