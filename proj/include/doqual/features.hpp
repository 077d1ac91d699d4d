#pragma once

// Feature groups, the 16 ablation configurations and per-document assembly.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "doqual/graph.hpp"
#include "doqual/ingest.hpp"
#include "doqual/pos.hpp"
#include "doqual/sentiment.hpp"
#include "doqual/textseg.hpp"
#include "doqual/topics.hpp"

namespace doqual {

/// Declaration order is the concatenation order of an assembled vector.
enum class FeatureGroup { meta, topics5, topics30, pos, length, readability, sentiment };

std::string_view to_string(FeatureGroup group);

struct ModelConfig {
  int id = 0;
  std::vector<FeatureGroup> groups;  // sorted in concatenation order
  std::string description;

  bool has(FeatureGroup g) const;
};

/// The 16 configurations, ordered by id.
const std::vector<ModelConfig>& model_configs();
/// Throws ParameterError for ids outside 1..16.
const ModelConfig& model_config(int id);
/// Parses "1-16", "1,3,5-7" and similar lists into sorted unique ids.
std::vector<int> parse_config_list(const std::string& spec);

/// Meta field names in vector order.
const std::vector<std::string>& meta_field_names(DocumentKind kind);

enum class VenueEncoding { index, onehot };

/// Maps venue strings to categories in first-appearance order.
class VenueCodes {
 public:
  VenueCodes() = default;
  static VenueCodes from_dataset(const Dataset& dataset);

  std::optional<std::size_t> code(const std::string& venue) const;
  const std::vector<std::string>& venues() const { return venues_; }

 private:
  std::vector<std::string> venues_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Graph statistics for one paper.
struct PaperNetworkFeatures {
  double betweenness = 0.0;
  double closeness = 0.0;
  double degree = 0.0;
  double in_citations = 0.0;
  double out_citations = 0.0;
  std::optional<AuthorFeatures> authors;
};

/// Per-paper network features, keyed by paper id.
using ArticleNetwork = std::unordered_map<std::string, PaperNetworkFeatures>;

ArticleNetwork build_article_network(const CitationGraph& graph,
                                     const std::vector<std::pair<std::string, std::string>>* authorship = nullptr,
                                     const PageRankParams& params = {}, bool normalized_betweenness = false);

/// Counts of meta fields that were missing and imputed as 0, keyed by field.
using ImputationLog = std::map<std::string, std::size_t>;

struct FeatureResources {
  const TopicModel* topics = nullptr;
  const TaggerModel* tagger = nullptr;
  /// Tagset for documents that carry their own tags. Defaults to the
  /// tagger's tagset, then to the built-in set for the corpus kind.
  const TagSet* tagset = nullptr;
  const SentimentLexicon* lexicon = nullptr;
  const ArticleNetwork* network = nullptr;
  const VenueCodes* venues = nullptr;
  VenueEncoding venue_encoding = VenueEncoding::index;
  int top_k = 5;
  int infer_iterations = 100;
  std::uint64_t infer_seed = 0;
  SegmentOptions segment;
  ImputationLog* imputation = nullptr;
};

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::string> names;
};

/// Width of one group for a corpus kind.
std::size_t group_dimension(FeatureGroup group, DocumentKind kind, const FeatureResources& resources,
                            int topic_count);

/// One group's values. `topic_dist` supplies a precomputed topic distribution;
/// otherwise it is inferred from resources.topics. Throws ConfigurationError
/// when a needed resource is absent and UndefinedInputError for readability
/// on a text without words.
FeatureVector group_features(const Document& doc, FeatureGroup group, const FeatureResources& resources,
                             std::optional<std::span<const double>> topic_dist = std::nullopt);

/// Concatenates the config's groups in the fixed order meta, topics, pos,
/// length, readability, sentiment.
FeatureVector assemble_features(const Document& doc, const ModelConfig& config, const FeatureResources& resources,
                                std::optional<std::span<const double>> topic_dist = std::nullopt);

}  // namespace doqual
