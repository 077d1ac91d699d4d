#include "doqual/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "doqual/diagnostics.hpp"
#include "doqual/error.hpp"

namespace doqual {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses two-column TSV rows, skipping blank and '#' lines.
template <typename Fn>
void for_each_pair(std::string_view content, const std::string& source, Fn&& fn) {
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(source, ln, "expected exactly two tab-separated fields");
    }
    fn(std::string_view(line).substr(0, tab), std::string_view(line).substr(tab + 1));
  }
}

}  // namespace

std::size_t CitationGraph::add_node(std::string_view id) {
  auto [it, inserted] = index_.try_emplace(std::string(id), ids_.size());
  if (inserted) {
    ids_.emplace_back(id);
    out_.emplace_back();
    in_.emplace_back();
  }
  return it->second;
}

bool CitationGraph::add_edge(std::string_view src, std::string_view dst) {
  if (src == dst) {
    add_node(src);
    warn("dropping self-citation of '" + std::string(src) + "'");
    return false;
  }
  const auto s = add_node(src);
  const auto d = add_node(dst);
  auto& outs = out_[s];
  if (std::find(outs.begin(), outs.end(), d) != outs.end()) return false;
  outs.push_back(d);
  in_[d].push_back(s);
  ++edge_count_;
  return true;
}

std::optional<std::size_t> CitationGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::vector<std::size_t>> CitationGraph::undirected_adjacency() const {
  std::vector<std::vector<std::size_t>> adj(ids_.size());
  for (std::size_t u = 0; u < ids_.size(); ++u) {
    adj[u] = out_[u];
    adj[u].insert(adj[u].end(), in_[u].begin(), in_[u].end());
    std::sort(adj[u].begin(), adj[u].end());
    adj[u].erase(std::unique(adj[u].begin(), adj[u].end()), adj[u].end());
  }
  return adj;
}

CitationGraph parse_edge_list(std::string_view content, const std::string& source) {
  CitationGraph g;
  for_each_pair(content, source, [&](std::string_view a, std::string_view b) { g.add_edge(a, b); });
  return g;
}

CitationGraph load_edge_list(const std::filesystem::path& path) {
  return parse_edge_list(read_file(path), path.string());
}

std::vector<double> pagerank(const CitationGraph& graph, const PageRankParams& params) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw ParameterError("PageRank needs a non-empty graph");
  if (!(params.damping > 0.0 && params.damping < 1.0)) throw ParameterError("damping must lie in (0, 1)");

  const double nd = static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / nd), next(n);
  double residual = 0.0;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (graph.cites(u).empty()) dangling += rank[u];
    }
    const double base = (1.0 - params.damping) / nd + params.damping * dangling / nd;
    std::fill(next.begin(), next.end(), base);
    for (std::size_t u = 0; u < n; ++u) {
      const auto& outs = graph.cites(u);
      if (outs.empty()) continue;
      const double share = params.damping * rank[u] / static_cast<double>(outs.size());
      for (auto v : outs) next[v] += share;
    }
    // Renormalize away accumulated rounding so the sum stays at 1.
    double total = 0.0;
    for (double x : next) total += x;
    residual = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      next[u] /= total;
      residual += std::abs(next[u] - rank[u]);
    }
    rank.swap(next);
    if (residual < params.tolerance) return rank;
  }
  throw ConvergenceError("PageRank did not converge in " + std::to_string(params.max_iterations) + " iterations",
                         residual);
}

Centralities centralities(const CitationGraph& graph, bool normalized) {
  const std::size_t n = graph.node_count();
  const auto adj = graph.undirected_adjacency();
  Centralities out;
  out.betweenness.assign(n, 0.0);
  out.closeness.assign(n, 0.0);
  out.degree.resize(n);
  for (std::size_t u = 0; u < n; ++u) out.degree[u] = adj[u].size();

  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long long> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    stack.clear();
    for (std::size_t v = 0; v < n; ++v) {
      preds[v].clear();
      sigma[v] = 0.0;
      delta[v] = 0.0;
      dist[v] = -1;
    }
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<std::size_t> queue;
    queue.push(s);
    long long dist_sum = 0;
    std::size_t reached = 0;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop();
      stack.push_back(v);
      ++reached;
      dist_sum += dist[v];
      for (auto w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    if (dist_sum > 0) {
      out.closeness[s] = static_cast<double>(reached - 1) / static_cast<double>(dist_sum);
    }
    while (!stack.empty()) {
      const auto w = stack.back();
      stack.pop_back();
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) out.betweenness[w] += delta[w];
    }
  }
  // Each unordered pair was visited from both ends.
  for (auto& b : out.betweenness) b /= 2.0;
  if (normalized && n > 2) {
    const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (auto& b : out.betweenness) b /= pairs;
  }
  return out;
}

NodeScores node_scores(const CitationGraph& graph, const PageRankParams& params, bool normalized_betweenness) {
  NodeScores scores;
  scores.pagerank = pagerank(graph, params);
  auto c = centralities(graph, normalized_betweenness);
  scores.betweenness = std::move(c.betweenness);
  scores.closeness = std::move(c.closeness);
  scores.degree = std::move(c.degree);
  const std::size_t n = graph.node_count();
  scores.in_citations.resize(n);
  scores.out_citations.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    scores.in_citations[u] = graph.cited_by(u).size();
    scores.out_citations[u] = graph.cites(u).size();
  }
  return scores;
}

std::vector<std::pair<std::string, std::string>> parse_authorship(std::string_view content,
                                                                  const std::string& source) {
  std::vector<std::pair<std::string, std::string>> rows;
  for_each_pair(content, source, [&](std::string_view paper, std::string_view author) {
    rows.emplace_back(paper, author);
  });
  return rows;
}

std::vector<std::pair<std::string, std::string>> load_authorship(const std::filesystem::path& path) {
  return parse_authorship(read_file(path), path.string());
}

std::unordered_map<std::string, AuthorFeatures> author_features(
    const CitationGraph& papers, const std::vector<std::pair<std::string, std::string>>& authorship,
    const PageRankParams& params) {
  std::unordered_map<std::string, std::vector<std::string>> authors_of;
  CitationGraph authors;
  for (const auto& [paper, author] : authorship) {
    auto& list = authors_of[paper];
    if (std::find(list.begin(), list.end(), author) == list.end()) list.push_back(author);
    authors.add_node(author);
  }
  std::unordered_map<std::string, double> in_count, out_count;
  for (std::size_t p = 0; p < papers.node_count(); ++p) {
    auto citing = authors_of.find(papers.ids()[p]);
    if (citing == authors_of.end()) continue;
    for (auto q : papers.cites(p)) {
      auto cited = authors_of.find(papers.ids()[q]);
      if (cited == authors_of.end()) continue;
      for (const auto& a : citing->second) {
        for (const auto& b : cited->second) {
          if (a == b) continue;
          out_count[a] += 1.0;
          in_count[b] += 1.0;
          authors.add_edge(a, b);
        }
      }
    }
  }

  std::unordered_map<std::string, AuthorFeatures> result;
  if (authors.node_count() == 0) return result;
  const auto ranks = pagerank(authors, params);
  for (const auto& [paper, list] : authors_of) {
    AuthorFeatures f;
    for (const auto& a : list) {
      f.in_citations += in_count.contains(a) ? in_count.at(a) : 0.0;
      f.out_citations += out_count.contains(a) ? out_count.at(a) : 0.0;
      f.pagerank += ranks[*authors.index_of(a)];
    }
    const double m = static_cast<double>(list.size());
    f.in_citations /= m;
    f.out_citations /= m;
    f.pagerank /= m;
    result.emplace(paper, f);
  }
  return result;
}

}  // namespace doqual
