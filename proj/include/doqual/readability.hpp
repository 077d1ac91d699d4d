#pragma once

#include <vector>

#include "doqual/document_kind.hpp"
#include "doqual/textseg.hpp"

namespace doqual {

struct ReadabilityScores {
  double cli = 0.0;
  double ari = 0.0;
  double gfi = 0.0;
};

/// Coleman-Liau: 0.0588 L - 0.296 S - 15.9, with L letters and S sentences
/// per 100 words. Throws UndefinedInputError when there are no words.
double coleman_liau(const TextStats& stats);

/// Automated Readability Index over non-whitespace characters.
double ari(const TextStats& stats);

/// Gunning fog. Complex words are those with three or more syllables.
double gunning_fog(const TextStats& stats);

ReadabilityScores readability_scores(const TextStats& stats);

/// Tweets carry [CLI]; articles carry [CLI, ARI, GFI].
std::vector<double> readability_features(const TextStats& stats, DocumentKind kind);

/// Tweets: [words]. Articles: [sentences, words, characters]. Unnormalized.
std::vector<double> length_features(const TextStats& stats, DocumentKind kind);

}  // namespace doqual
