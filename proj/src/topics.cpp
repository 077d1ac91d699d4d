#include "doqual/topics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "doqual/error.hpp"
#include "doqual/random.hpp"

namespace doqual {

namespace {

constexpr std::string_view kLdaMagic = "DOQUAL-LDA-1";

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::size_t sample_index(std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double& w : weights) {
    total += w;
    w = total;
  }
  const double u = rng.uniform() * total;
  const auto it = std::upper_bound(weights.begin(), weights.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - weights.begin()), weights.size() - 1);
}

}  // namespace

std::optional<std::size_t> TopicModel::word_id(std::string_view word) const {
  auto it = word_index_.find(std::string(word));
  if (it == word_index_.end()) return std::nullopt;
  return it->second;
}

std::string TopicModel::normalize(std::string_view token) const {
  return lowercase_ ? lower_ascii(token) : std::string(token);
}

void TopicModel::index_vocabulary() {
  word_index_.clear();
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) word_index_.emplace(vocabulary_[i], i);
}

std::vector<double> TopicModel::topic_word_distribution(std::size_t topic) const {
  const std::size_t v = vocabulary_.size();
  std::vector<double> dist(v);
  const double denom = static_cast<double>(topic_totals_[topic]) + static_cast<double>(v) * beta_;
  for (std::size_t w = 0; w < v; ++w) {
    dist[w] = (static_cast<double>(topic_word_count(topic, w)) + beta_) / denom;
  }
  return dist;
}

TopicModel TopicModel::relabeled(const std::vector<std::size_t>& perm) const {
  const auto k = static_cast<std::size_t>(topics_);
  if (perm.size() != k) throw ParameterError("topic permutation has the wrong length");
  std::vector<bool> seen(k, false);
  for (auto p : perm) {
    if (p >= k || seen[p]) throw ParameterError("topic relabeling is not a permutation");
    seen[p] = true;
  }
  TopicModel out = *this;
  const std::size_t v = vocabulary_.size();
  for (std::size_t j = 0; j < k; ++j) {
    std::copy_n(topic_word_.begin() + static_cast<std::ptrdiff_t>(perm[j] * v), v,
                out.topic_word_.begin() + static_cast<std::ptrdiff_t>(j * v));
    out.topic_totals_[j] = topic_totals_[perm[j]];
  }
  for (std::size_t d = 0; d < doc_topic_.size(); ++d) {
    for (std::size_t j = 0; j < k; ++j) out.doc_topic_[d][j] = doc_topic_[d][perm[j]];
  }
  return out;
}

TopicModel fit_lda(const std::vector<std::vector<std::string>>& corpus, const LdaParams& params) {
  if (corpus.empty()) throw ParameterError("LDA needs a non-empty corpus");
  if (params.topics < 2) throw ParameterError("LDA needs at least 2 topics");
  if (params.iterations < 0) throw ParameterError("LDA iterations must be non-negative");
  const double alpha = params.resolved_alpha();
  if (!(alpha > 0.0) || !(params.beta > 0.0)) throw ParameterError("LDA concentrations must be positive");

  TopicModel model;
  model.topics_ = params.topics;
  model.alpha_ = alpha;
  model.beta_ = params.beta;
  model.seed_ = params.seed;
  model.lowercase_ = params.lowercase;

  // Vocabulary in first-appearance order, filtered by document frequency.
  std::vector<std::vector<std::string>> normalized(corpus.size());
  std::unordered_map<std::string, std::size_t> doc_freq;
  std::vector<std::string> first_seen;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    std::unordered_set<std::string> in_doc;
    for (const auto& tok : corpus[d]) {
      auto w = model.normalize(tok);
      if (params.stopwords.contains(w)) continue;
      if (in_doc.insert(w).second) {
        if (doc_freq[w]++ == 0) first_seen.push_back(w);
      }
      normalized[d].push_back(std::move(w));
    }
  }
  for (const auto& w : first_seen) {
    if (doc_freq[w] >= params.min_doc_freq) model.vocabulary_.push_back(w);
  }
  model.index_vocabulary();

  const auto k = static_cast<std::size_t>(params.topics);
  const std::size_t v = model.vocabulary_.size();
  std::vector<std::vector<std::size_t>> words(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& w : normalized[d]) {
      if (auto id = model.word_id(w)) words[d].push_back(*id);
    }
  }

  model.topic_word_.assign(k * v, 0);
  model.topic_totals_.assign(k, 0);
  std::vector<std::vector<std::int64_t>> doc_counts(corpus.size(), std::vector<std::int64_t>(k, 0));
  std::vector<std::vector<std::size_t>> assign(corpus.size());

  Rng rng(params.seed);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    assign[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      const auto z = static_cast<std::size_t>(rng.below(k));
      assign[d][i] = z;
      ++doc_counts[d][z];
      ++model.topic_word_[z * v + words[d][i]];
      ++model.topic_totals_[z];
    }
  }

  const double vbeta = static_cast<double>(v) * params.beta;
  std::vector<double> weights(k);
  for (int iter = 0; iter < params.iterations; ++iter) {
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      auto& counts = doc_counts[d];
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::size_t w = words[d][i];
        std::size_t z = assign[d][i];
        --counts[z];
        --model.topic_word_[z * v + w];
        --model.topic_totals_[z];
        for (std::size_t t = 0; t < k; ++t) {
          weights[t] = (static_cast<double>(counts[t]) + alpha) *
                       (static_cast<double>(model.topic_word_[t * v + w]) + params.beta) /
                       (static_cast<double>(model.topic_totals_[t]) + vbeta);
        }
        z = sample_index(weights, rng);
        assign[d][i] = z;
        ++counts[z];
        ++model.topic_word_[z * v + w];
        ++model.topic_totals_[z];
      }
    }
  }

  model.doc_topic_.resize(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const double denom = static_cast<double>(words[d].size()) + static_cast<double>(k) * alpha;
    auto& row = model.doc_topic_[d];
    row.resize(k);
    for (std::size_t t = 0; t < k; ++t) row[t] = (static_cast<double>(doc_counts[d][t]) + alpha) / denom;
  }
  return model;
}

std::vector<double> infer_doc_topics(const TopicModel& model, const std::vector<std::string>& tokens,
                                     int iterations, std::uint64_t seed) {
  const auto k = static_cast<std::size_t>(model.topics());
  if (k == 0) throw ParameterError("topic model is not fitted");
  const std::size_t v = model.vocabulary().size();
  std::vector<std::size_t> words;
  for (const auto& tok : tokens) {
    if (auto id = model.word_id(model.normalize(tok))) words.push_back(*id);
  }
  if (words.empty()) return std::vector<double>(k, 1.0 / static_cast<double>(k));

  const double alpha = model.alpha();
  const double beta = model.beta();
  const double vbeta = static_cast<double>(v) * beta;
  const auto& tw = model.topic_word_counts();
  const auto& totals = model.topic_totals();

  Rng rng(seed);
  std::vector<std::int64_t> counts(k, 0);
  std::vector<std::size_t> assign(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    assign[i] = static_cast<std::size_t>(rng.below(k));
    ++counts[assign[i]];
  }
  std::vector<double> weights(k);
  for (int iter = 0; iter < iterations; ++iter) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::size_t w = words[i];
      --counts[assign[i]];
      for (std::size_t t = 0; t < k; ++t) {
        weights[t] = (static_cast<double>(counts[t]) + alpha) *
                     (static_cast<double>(tw[t * v + w]) + beta) /
                     (static_cast<double>(totals[t]) + vbeta);
      }
      assign[i] = sample_index(weights, rng);
      ++counts[assign[i]];
    }
  }
  std::vector<double> dist(k);
  const double denom = static_cast<double>(words.size()) + static_cast<double>(k) * alpha;
  for (std::size_t t = 0; t < k; ++t) dist[t] = (static_cast<double>(counts[t]) + alpha) / denom;
  return dist;
}

std::vector<double> top_k_normalized(const std::vector<double>& dist, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > dist.size()) {
    throw ParameterError("top-k size " + std::to_string(k) + " outside [1, " + std::to_string(dist.size()) + "]");
  }
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
  std::vector<double> top(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (std::size_t i = 0; i < top.size(); ++i) {
    top[i] = dist[order[i]];
    sum += top[i];
  }
  if (sum > 0.0) {
    for (double& x : top) x /= sum;
  } else {
    std::fill(top.begin(), top.end(), 1.0 / static_cast<double>(k));
  }
  return top;
}

std::string TopicModel::serialize() const {
  std::ostringstream out;
  char buf[40];
  out << kLdaMagic << '\n';
  out << "topics " << topics_ << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", alpha_);
  out << "alpha " << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", beta_);
  out << "beta " << buf << '\n';
  out << "seed " << seed_ << '\n';
  out << "lowercase " << (lowercase_ ? 1 : 0) << '\n';
  out << "vocabulary " << vocabulary_.size() << '\n';
  for (const auto& w : vocabulary_) out << w << '\n';
  out << "counts\n";
  const std::size_t v = vocabulary_.size();
  for (int t = 0; t < topics_; ++t) {
    for (std::size_t w = 0; w < v; ++w) {
      if (w) out << ' ';
      out << topic_word_[static_cast<std::size_t>(t) * v + w];
    }
    out << '\n';
  }
  return out.str();
}

TopicModel TopicModel::deserialize(std::string_view content) {
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t ln = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError("<lda>", ln + 1, std::string("missing ") + what);
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto keyed = [&](const char* key) {
    std::istringstream fields(next_line(key));
    std::string name, value;
    if (!(fields >> name >> value) || name != key) {
      throw ParseError("<lda>", ln, std::string("expected '") + key + "'");
    }
    return value;
  };
  if (next_line("magic") != kLdaMagic) throw ParseError("<lda>", 1, "not a DOQUAL-LDA-1 model");

  TopicModel model;
  try {
    model.topics_ = std::stoi(keyed("topics"));
    model.alpha_ = std::stod(keyed("alpha"));
    model.beta_ = std::stod(keyed("beta"));
    model.seed_ = std::stoull(keyed("seed"));
    model.lowercase_ = keyed("lowercase") != "0";
    const auto v = static_cast<std::size_t>(std::stoull(keyed("vocabulary")));
    for (std::size_t i = 0; i < v; ++i) model.vocabulary_.push_back(next_line("vocabulary word"));
    if (next_line("counts header") != "counts") throw ParseError("<lda>", ln, "expected 'counts'");
    const auto k = static_cast<std::size_t>(model.topics_);
    model.topic_word_.assign(k * v, 0);
    model.topic_totals_.assign(k, 0);
    for (std::size_t t = 0; t < k; ++t) {
      std::istringstream row(next_line("count row"));
      for (std::size_t w = 0; w < v; ++w) {
        std::int64_t c;
        if (!(row >> c) || c < 0) throw ParseError("<lda>", ln, "bad count row");
        model.topic_word_[t * v + w] = c;
        model.topic_totals_[t] += c;
      }
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("<lda>", ln, "bad numeric field");
  } catch (const std::out_of_range&) {
    throw ParseError("<lda>", ln, "numeric field out of range");
  }
  if (model.topics_ < 2) throw ParseError("<lda>", 2, "topic count must be at least 2");
  model.index_vocabulary();
  return model;
}

void TopicModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize();
}

TopicModel TopicModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace doqual
