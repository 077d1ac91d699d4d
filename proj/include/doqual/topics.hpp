#pragma once

// LDA fitted by collapsed Gibbs sampling, fold-in inference for unseen
// documents, and the top-k renormalized topic feature.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace doqual {

struct LdaParams {
  int topics = 30;
  /// Per-document concentration; 50 / topics when unset.
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 0;
  /// Vocabulary filter: words must occur in at least this many documents.
  std::size_t min_doc_freq = 2;
  bool lowercase = true;
  std::unordered_set<std::string> stopwords;

  double resolved_alpha() const { return alpha.value_or(50.0 / static_cast<double>(topics)); }
};

class TopicModel {
 public:
  TopicModel() = default;

  int topics() const { return topics_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::optional<std::size_t> word_id(std::string_view word) const;

  /// topics() x vocabulary().size(), row-major.
  const std::vector<std::int64_t>& topic_word_counts() const { return topic_word_; }
  std::int64_t topic_word_count(std::size_t topic, std::size_t word) const {
    return topic_word_[topic * vocabulary_.size() + word];
  }
  const std::vector<std::int64_t>& topic_totals() const { return topic_totals_; }

  /// One K-simplex row per training document, in corpus order. Empty after load().
  const std::vector<std::vector<double>>& doc_topic() const { return doc_topic_; }

  /// Smoothed topic-word distribution for one topic.
  std::vector<double> topic_word_distribution(std::size_t topic) const;

  /// Applies the model's vocabulary normalization (lowercasing) to a token.
  std::string normalize(std::string_view token) const;

  /// Topic j of the result is topic perm[j] of this model.
  TopicModel relabeled(const std::vector<std::size_t>& perm) const;

  std::string serialize() const;
  static TopicModel deserialize(std::string_view content);
  void save(const std::filesystem::path& path) const;
  static TopicModel load(const std::filesystem::path& path);

  friend TopicModel fit_lda(const std::vector<std::vector<std::string>>& corpus, const LdaParams& params);

 private:
  void index_vocabulary();

  int topics_ = 0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::uint64_t seed_ = 0;
  bool lowercase_ = true;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::size_t> word_index_;
  std::vector<std::int64_t> topic_word_;
  std::vector<std::int64_t> topic_totals_;
  std::vector<std::vector<double>> doc_topic_;
};

/// Throws ParameterError for an empty corpus, topics < 2, non-positive
/// concentrations or negative iterations. Zero iterations returns the
/// random initial assignment.
TopicModel fit_lda(const std::vector<std::vector<std::string>>& corpus, const LdaParams& params);

/// Fold-in Gibbs sampling with the topic-word counts frozen. Unknown words
/// are skipped; a document with no known words gets the uniform vector.
std::vector<double> infer_doc_topics(const TopicModel& model, const std::vector<std::string>& tokens,
                                     int iterations, std::uint64_t seed);

/// The k largest probabilities (ties to the lower topic index), renormalized
/// and in descending order. Throws ParameterError unless 1 <= k <= size.
std::vector<double> top_k_normalized(const std::vector<double>& dist, int k);

}  // namespace doqual
