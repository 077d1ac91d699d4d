#include "doqual/features.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "doqual/diagnostics.hpp"
#include "doqual/error.hpp"
#include "doqual/readability.hpp"

namespace doqual {

namespace {

using G = FeatureGroup;

std::vector<ModelConfig> build_configs() {
  const std::vector<G> full5{G::meta, G::topics5, G::pos, G::length, G::readability, G::sentiment};
  const std::vector<G> full30{G::meta, G::topics30, G::pos, G::length, G::readability, G::sentiment};
  auto without = [&](G g) {
    std::vector<G> out;
    for (auto x : full5) {
      if (x != g) out.push_back(x);
    }
    return out;
  };
  std::vector<ModelConfig> c = {
      {1, {G::meta}, "Meta/Network"},
      {2, {G::readability}, "Readability"},
      {3, {G::sentiment}, "Sentiment"},
      {4, {G::topics5, G::pos, G::length}, "Textual (Topics + POS + Length)"},
      {5, full5, "Full 5 topics"},
      {6, full30, "Full 30 topics"},
      {7, without(G::readability), "Full no readability"},
      {8, without(G::sentiment), "Full no sentiment"},
      {9, without(G::topics5), "Full no topics"},
      {10, without(G::pos), "Full no POS"},
      {11, without(G::length), "Full no length"},
      {12, without(G::meta), "Full no network/meta"},
      {13, {G::topics5}, "Coherence only (5 topics)"},
      {14, {G::topics30}, "Coherence only (30 topics)"},
      {15, {G::topics5, G::pos, G::length, G::sentiment}, "Textual (Topics + POS + Length) + Sentiment"},
      {16, {G::meta, G::sentiment}, "Meta/Network + Sentiment"},
  };
  for (auto& cfg : c) std::sort(cfg.groups.begin(), cfg.groups.end());
  return c;
}

std::optional<double> numeric_meta(const Document& doc, const std::string& field) {
  auto it = doc.meta.find(field);
  if (it == doc.meta.end()) return std::nullopt;
  if (const double* v = std::get_if<double>(&it->second)) return *v;
  const auto& s = std::get<std::string>(it->second);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

double impute(const std::string& field, const FeatureResources& r) {
  if (r.imputation) ++(*r.imputation)[field];
  return 0.0;
}

const TagSet& presence_tagset(DocumentKind kind, const FeatureResources& r) {
  static const TagSet penn = TagSet::penn38();
  static const TagSet tweet = TagSet::tweet24();
  if (r.tagset) return *r.tagset;
  if (r.tagger) return r.tagger->tagset();
  return kind == DocumentKind::tweet ? tweet : penn;
}

void meta_features(const Document& doc, const FeatureResources& r, FeatureVector& out) {
  const auto& fields = meta_field_names(doc.kind);
  const PaperNetworkFeatures* net = nullptr;
  if (doc.kind == DocumentKind::article && r.network) {
    auto it = r.network->find(doc.id);
    if (it != r.network->end()) net = &it->second;
  }
  for (const auto& field : fields) {
    if (doc.kind == DocumentKind::article && field == "venue") {
      std::optional<std::size_t> code;
      std::optional<double> numeric;
      if (auto it = doc.meta.find("venue"); it != doc.meta.end()) {
        if (const auto* s = std::get_if<std::string>(&it->second)) {
          if (r.venues) code = r.venues->code(*s);
        } else {
          numeric = std::get<double>(it->second);
        }
      }
      if (r.venue_encoding == VenueEncoding::onehot && r.venues) {
        if (!code) impute("venue", r);
        for (std::size_t v = 0; v < r.venues->venues().size(); ++v) {
          out.values.push_back(code && *code == v ? 1.0 : 0.0);
          out.names.push_back("meta:venue=" + r.venues->venues()[v]);
        }
        continue;
      }
      double value;
      if (code) {
        value = static_cast<double>(*code + 1);
      } else if (numeric) {
        value = *numeric;
      } else {
        value = impute("venue", r);
      }
      out.values.push_back(value);
      out.names.push_back("meta:venue");
      continue;
    }

    std::optional<double> value;
    if (net) {
      if (field == "betweenness") value = net->betweenness;
      else if (field == "closeness") value = net->closeness;
      else if (field == "degree") value = net->degree;
      else if (field == "in_citations") value = net->in_citations;
      else if (field == "out_citations") value = net->out_citations;
      else if (net->authors) {
        if (field == "author_in_citations") value = net->authors->in_citations;
        else if (field == "author_out_citations") value = net->authors->out_citations;
        else if (field == "author_pagerank") value = net->authors->pagerank;
      }
    }
    if (!value) value = numeric_meta(doc, field);
    out.values.push_back(value ? *value : impute(field, r));
    out.names.push_back("meta:" + field);
  }
}

}  // namespace

std::string_view to_string(FeatureGroup group) {
  switch (group) {
    case G::meta: return "meta";
    case G::topics5: return "topics5";
    case G::topics30: return "topics30";
    case G::pos: return "pos";
    case G::length: return "length";
    case G::readability: return "readability";
    case G::sentiment: return "sentiment";
  }
  return "unknown";
}

bool ModelConfig::has(FeatureGroup g) const { return std::find(groups.begin(), groups.end(), g) != groups.end(); }

const std::vector<ModelConfig>& model_configs() {
  static const std::vector<ModelConfig> configs = build_configs();
  return configs;
}

const ModelConfig& model_config(int id) {
  if (id < 1 || id > 16) throw ParameterError("model config id " + std::to_string(id) + " outside 1..16");
  return model_configs()[static_cast<std::size_t>(id - 1)];
}

std::vector<int> parse_config_list(const std::string& spec) {
  std::set<int> ids;
  std::size_t start = 0;
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParameterError("bad config list '" + spec + "'");
    }
    return v;
  };
  while (start <= spec.size()) {
    auto comma = spec.find(',', start);
    if (comma == std::string::npos) comma = spec.size();
    std::string_view item(spec.data() + start, comma - start);
    if (item.empty()) throw ParameterError("bad config list '" + spec + "'");
    const auto dash = item.find('-');
    int lo, hi;
    if (dash == std::string_view::npos) {
      lo = hi = parse_int(item);
    } else {
      lo = parse_int(item.substr(0, dash));
      hi = parse_int(item.substr(dash + 1));
    }
    if (lo > hi) throw ParameterError("bad config range in '" + spec + "'");
    for (int id = lo; id <= hi; ++id) {
      model_config(id);
      ids.insert(id);
    }
    start = comma + 1;
  }
  return {ids.begin(), ids.end()};
}

const std::vector<std::string>& meta_field_names(DocumentKind kind) {
  static const std::vector<std::string> tweet{"followers", "favorites", "statuses"};
  static const std::vector<std::string> article{
      "author_in_citations", "author_out_citations", "author_pagerank", "year",         "venue",
      "betweenness",         "closeness",            "degree",          "in_citations", "out_citations"};
  return kind == DocumentKind::tweet ? tweet : article;
}

VenueCodes VenueCodes::from_dataset(const Dataset& dataset) {
  VenueCodes codes;
  for (const auto& d : dataset.documents) {
    auto it = d.meta.find("venue");
    if (it == d.meta.end()) continue;
    if (const auto* s = std::get_if<std::string>(&it->second)) {
      if (codes.index_.emplace(*s, codes.venues_.size()).second) codes.venues_.push_back(*s);
    }
  }
  return codes;
}

std::optional<std::size_t> VenueCodes::code(const std::string& venue) const {
  auto it = index_.find(venue);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ArticleNetwork build_article_network(const CitationGraph& graph,
                                     const std::vector<std::pair<std::string, std::string>>* authorship,
                                     const PageRankParams& params, bool normalized_betweenness) {
  ArticleNetwork network;
  if (graph.node_count() == 0) return network;
  const auto c = centralities(graph, normalized_betweenness);
  std::unordered_map<std::string, AuthorFeatures> authors;
  if (authorship) authors = author_features(graph, *authorship, params);
  for (std::size_t u = 0; u < graph.node_count(); ++u) {
    PaperNetworkFeatures f;
    f.betweenness = c.betweenness[u];
    f.closeness = c.closeness[u];
    f.degree = static_cast<double>(c.degree[u]);
    f.in_citations = static_cast<double>(graph.cited_by(u).size());
    f.out_citations = static_cast<double>(graph.cites(u).size());
    if (authorship) {
      auto it = authors.find(graph.ids()[u]);
      f.authors = it != authors.end() ? it->second : AuthorFeatures{};
    }
    network.emplace(graph.ids()[u], f);
  }
  return network;
}

std::size_t group_dimension(FeatureGroup group, DocumentKind kind, const FeatureResources& r, int topic_count) {
  const bool tweet = kind == DocumentKind::tweet;
  switch (group) {
    case G::meta: {
      std::size_t n = meta_field_names(kind).size();
      if (!tweet && r.venue_encoding == VenueEncoding::onehot && r.venues) n = n - 1 + r.venues->venues().size();
      return n;
    }
    case G::topics5: return static_cast<std::size_t>(r.top_k);
    case G::topics30: return static_cast<std::size_t>(topic_count);
    case G::pos: return presence_tagset(kind, r).size();
    case G::length: return tweet ? 1 : 3;
    case G::readability: return tweet ? 1 : 3;
    case G::sentiment: return tweet ? 1 : 2;
  }
  return 0;
}

FeatureVector group_features(const Document& doc, FeatureGroup group, const FeatureResources& r,
                             std::optional<std::span<const double>> topic_dist) {
  FeatureVector out;
  const bool tweet = doc.kind == DocumentKind::tweet;
  switch (group) {
    case G::meta:
      meta_features(doc, r, out);
      break;

    case G::topics5:
    case G::topics30: {
      std::vector<double> dist;
      if (topic_dist) {
        dist.assign(topic_dist->begin(), topic_dist->end());
      } else {
        if (!r.topics) throw ConfigurationError(std::string(to_string(group)) + " features need a fitted topic model");
        std::vector<std::string> tokens = tokenize(r.segment.strip_urls ? strip_urls(doc.text) : doc.text);
        dist = infer_doc_topics(*r.topics, tokens, r.infer_iterations, r.infer_seed);
      }
      if (group == G::topics5) {
        out.values = top_k_normalized(dist, r.top_k);
        for (int i = 0; i < r.top_k; ++i) out.names.push_back("topics5:rank" + std::to_string(i + 1));
      } else {
        out.values = std::move(dist);
        for (std::size_t i = 0; i < out.values.size(); ++i) out.names.push_back("topics30:topic" + std::to_string(i));
      }
      break;
    }

    case G::pos: {
      const TagSet& tagset = presence_tagset(doc.kind, r);
      std::vector<std::string> tags;
      if (doc.tags) {
        tags = *doc.tags;
      } else {
        if (!r.tagger) throw ConfigurationError("pos features need a trained tagger or pre-tagged documents");
        for (const auto& sentence : split_sentences(doc.text, r.segment)) {
          auto t = r.tagger->tag(tokenize(sentence));
          tags.insert(tags.end(), t.begin(), t.end());
        }
      }
      const auto present = pos_presence_vector(tags, tagset);
      for (std::size_t i = 0; i < present.size(); ++i) {
        out.values.push_back(present[i]);
        out.names.push_back("pos:" + tagset.tags()[i]);
      }
      break;
    }

    case G::length: {
      out.values = length_features(text_stats(doc.text, r.segment), doc.kind);
      if (tweet) {
        out.names = {"length:words"};
      } else {
        out.names = {"length:sentences", "length:words", "length:characters"};
      }
      break;
    }

    case G::readability: {
      out.values = readability_features(text_stats(doc.text, r.segment), doc.kind);
      if (tweet) {
        out.names = {"readability:cli"};
      } else {
        out.names = {"readability:cli", "readability:ari", "readability:gfi"};
      }
      break;
    }

    case G::sentiment: {
      if (!r.lexicon) throw ConfigurationError("sentiment features need a lexicon");
      const std::string text = r.segment.strip_urls ? strip_urls(doc.text) : doc.text;
      if (tweet) {
        out.values = {tweet_sentiment(tokenize(text), *r.lexicon)};
        out.names = {"sentiment:score"};
      } else {
        const auto sentences = split_sentences(text, r.segment);
        if (sentences.empty()) {
          out.values = {r.lexicon->neutral(), r.lexicon->neutral()};
        } else {
          const auto s = article_sentiment(sentences, *r.lexicon);
          out.values = {s.average, s.maximum};
        }
        out.names = {"sentiment:average", "sentiment:maximum"};
      }
      break;
    }
  }
  return out;
}

FeatureVector assemble_features(const Document& doc, const ModelConfig& config, const FeatureResources& resources,
                                std::optional<std::span<const double>> topic_dist) {
  FeatureVector out;
  for (auto g : config.groups) {
    auto part = group_features(doc, g, resources, topic_dist);
    out.values.insert(out.values.end(), part.values.begin(), part.values.end());
    out.names.insert(out.names.end(), part.names.begin(), part.names.end());
  }
  return out;
}

}  // namespace doqual
