#pragma once

// Planted-signal corpora for testing and demos. The label is a noisy
// threshold of one meta field (followers for tweets, in-citations for
// articles); the text is drawn independently of the label.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "doqual/ingest.hpp"
#include "doqual/pos.hpp"

namespace doqual {

struct SyntheticOptions {
  DocumentKind kind = DocumentKind::tweet;
  std::size_t documents = 1000;
  std::uint64_t seed = 7;
  /// Standard deviation of the noise added to the log of the planted field.
  double noise = 0.1;
};

struct SyntheticBundle {
  Dataset dataset;                    // unlabeled, with label_raw set
  std::vector<TaggedSentence> tagged; // tagger training sentences in the kind's tagset
  std::string lexicon_tsv;            // lexicon file contents
  std::string edges_tsv;              // random citation edges (articles only)
  double threshold = 0.0;             // article PageRank threshold matching the planted rule
};

SyntheticBundle make_synthetic(const SyntheticOptions& options);

/// Tagged corpus in `word_TAG` line format.
std::string serialize_tagged_corpus(const std::vector<TaggedSentence>& corpus);

}  // namespace doqual
