#pragma once

// Citation graph analytics: PageRank, centralities and the article label rule.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace doqual {

class CitationGraph {
 public:
  /// Returns the node index, adding the node if needed.
  std::size_t add_node(std::string_view id);
  /// `src` cites `dst`. Self-loops are dropped with a warning and duplicates
  /// are ignored; returns true when a new edge was stored.
  bool add_edge(std::string_view src, std::string_view dst);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  const std::vector<std::size_t>& cites(std::size_t node) const { return out_[node]; }
  const std::vector<std::size_t>& cited_by(std::size_t node) const { return in_[node]; }

  /// Distinct neighbours ignoring direction, sorted.
  std::vector<std::vector<std::size_t>> undirected_adjacency() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::size_t edge_count_ = 0;
};

/// `src<TAB>dst` rows; `#` starts a comment line.
CitationGraph load_edge_list(const std::filesystem::path& path);
CitationGraph parse_edge_list(std::string_view content, const std::string& source = "<memory>");

struct PageRankParams {
  double damping = 0.85;
  double tolerance = 1e-9;
  int max_iterations = 200;
};

/// Power iteration in citation direction; dangling mass is spread uniformly.
/// Throws ConvergenceError when the L1 change is still >= tolerance after
/// max_iterations.
std::vector<double> pagerank(const CitationGraph& graph, const PageRankParams& params = {});

struct Centralities {
  std::vector<double> betweenness;
  std::vector<double> closeness;
  std::vector<std::size_t> degree;
};

/// Brandes betweenness (unordered pair counts unless `normalized`),
/// closeness and degree on the undirected projection.
Centralities centralities(const CitationGraph& graph, bool normalized = false);

struct NodeScores {
  std::vector<double> pagerank;
  std::vector<double> betweenness;
  std::vector<double> closeness;
  std::vector<std::size_t> degree;
  std::vector<std::size_t> in_citations;
  std::vector<std::size_t> out_citations;
};

NodeScores node_scores(const CitationGraph& graph, const PageRankParams& params = {},
                       bool normalized_betweenness = false);

enum class CitationClass { A, Y };

/// Strictly above the threshold is Y (well cited), otherwise A.
inline CitationClass threshold_label(double score, double threshold) {
  return score > threshold ? CitationClass::Y : CitationClass::A;
}

/// Author-level aggregates, averaged over each paper's authors.
struct AuthorFeatures {
  double in_citations = 0.0;
  double out_citations = 0.0;
  double pagerank = 0.0;
};

/// `paper_id<TAB>author_id` rows.
std::vector<std::pair<std::string, std::string>> load_authorship(const std::filesystem::path& path);
std::vector<std::pair<std::string, std::string>> parse_authorship(std::string_view content,
                                                                  const std::string& source = "<memory>");

/// Builds the author-collapsed graph (one edge per citing-author/cited-author
/// pair of every citation) and maps its statistics back to papers.
std::unordered_map<std::string, AuthorFeatures> author_features(
    const CitationGraph& papers, const std::vector<std::pair<std::string, std::string>>& authorship,
    const PageRankParams& params = {});

}  // namespace doqual
