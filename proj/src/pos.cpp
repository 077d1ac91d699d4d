#include "doqual/pos.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "doqual/error.hpp"
#include "doqual/random.hpp"

namespace doqual {

namespace {

constexpr std::string_view kTaggerMagic = "DOQUAL-TAGGER-1";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    auto line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == content.size()) break;
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string suffix(const std::string& s, std::size_t n) {
  return s.size() <= n ? s : s.substr(s.size() - n);
}

// Context for position i given already-decided tags for positions < i.
std::vector<std::string> extract_features(const std::vector<std::string>& lowered, std::size_t i,
                                          const std::string& word, const std::string& prev,
                                          const std::string& prev2) {
  const std::string& lw = lowered[i];
  const std::string prev_word = i > 0 ? lowered[i - 1] : "-START-";
  const std::string next_word = i + 1 < lowered.size() ? lowered[i + 1] : "-END-";
  return {
      "bias",
      "w=" + word,
      "lw=" + lw,
      "s1=" + suffix(lw, 1),
      "s2=" + suffix(lw, 2),
      "s3=" + suffix(lw, 3),
      "p1=" + prev,
      "p2=" + prev2,
      "p12=" + prev + "|" + prev2,
      "p1w=" + prev + "|" + lw,
      "pw=" + prev_word,
      "nw=" + next_word,
  };
}

}  // namespace

TagSet::TagSet(std::string name, std::vector<std::string> tags)
    : name_(std::move(name)), tags_(std::move(tags)) {
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i].empty()) throw SchemaError("tagset '" + name_ + "' contains an empty tag");
    if (!index_.emplace(tags_[i], i).second) {
      throw SchemaError("tagset '" + name_ + "' lists tag '" + tags_[i] + "' twice");
    }
  }
}

std::optional<std::size_t> TagSet::index_of(std::string_view tag) const {
  auto it = index_.find(std::string(tag));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TagSet TagSet::penn38() {
  return TagSet("penn38",
                {"CC",  "CD",  "DT",   "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS",  "LS",
                 "MD",  "NN",  "NNS",  "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB",
                 "RBR", "RBS", "RP",   "SYM", "TO",  "UH",  "VB",  "VBD", "VBG",  "VBN",
                 "VBP", "VBZ", "WDT",  "WP",  "WP$", "WRB", ".",   ","});
}

TagSet TagSet::tweet24() {
  return TagSet("tweet24", {"N", "O", "^", "S", "Z", "V", "L", "A", "R", "!", "D", "P",
                            "&", "T", "X", "Y", "#", "@", "~", "U", "E", "$", ",", "G"});
}

TagSet load_tagset(const std::filesystem::path& path) {
  std::vector<std::string> tags;
  const std::string content = read_file(path);
  for (auto line : split_lines(content)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (!line.empty()) tags.emplace_back(line);
  }
  return TagSet(path.stem().string(), std::move(tags));
}

TagSet resolve_tagset(const std::string& name_or_path) {
  if (name_or_path == "penn38") return TagSet::penn38();
  if (name_or_path == "tweet24") return TagSet::tweet24();
  return load_tagset(name_or_path);
}

std::vector<TaggedSentence> parse_tagged_corpus(std::string_view content, const std::string& source) {
  std::vector<TaggedSentence> corpus;
  const auto lines = split_lines(content);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = lines[ln];
    if (line.empty()) continue;
    TaggedSentence sentence;
    std::size_t start = 0;
    while (start < line.size()) {
      auto end = line.find(' ', start);
      if (end == std::string_view::npos) end = line.size();
      const auto item = line.substr(start, end - start);
      start = end + 1;
      if (item.empty()) continue;
      const auto us = item.rfind('_');
      if (us == std::string_view::npos || us == 0 || us + 1 == item.size()) {
        throw ParseError(source, ln + 1, "expected word_TAG, got '" + std::string(item) + "'");
      }
      sentence.tokens.emplace_back(item.substr(0, us));
      sentence.tags.emplace_back(item.substr(us + 1));
    }
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

std::vector<TaggedSentence> load_tagged_corpus(const std::filesystem::path& path) {
  return parse_tagged_corpus(read_file(path), path.string());
}

std::size_t TaggerModel::predict(const std::vector<std::string>& features) const {
  std::vector<double> scores(tagset_.size(), 0.0);
  for (const auto& f : features) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t t = 0; t < scores.size(); ++t) scores[t] += it->second[t];
  }
  std::size_t best = 0;
  for (std::size_t t = 1; t < scores.size(); ++t) {
    if (scores[t] > scores[best]) best = t;
  }
  return best;
}

std::vector<std::string> TaggerModel::tag(const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::vector<std::string> lowered;
  lowered.reserve(tokens.size());
  for (const auto& t : tokens) lowered.push_back(lowercase(t));
  std::string prev = "-START-", prev2 = "-START2-";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto best = predict(extract_features(lowered, i, tokens[i], prev, prev2));
    out.push_back(tagset_.tags()[best]);
    prev2 = std::move(prev);
    prev = out.back();
  }
  return out;
}

TaggerModel train_tagger(const std::vector<TaggedSentence>& corpus, const TagSet& tagset, int epochs,
                         std::uint64_t seed) {
  if (corpus.empty()) throw SchemaError("cannot train a tagger on an empty corpus");
  if (epochs < 1) throw ParameterError("tagger epochs must be at least 1");
  if (tagset.size() == 0) throw SchemaError("cannot train a tagger with an empty tagset");

  std::vector<std::vector<std::size_t>> gold(corpus.size());
  std::vector<std::vector<std::string>> lowered(corpus.size());
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& sent = corpus[s];
    if (sent.tokens.size() != sent.tags.size()) {
      throw SchemaError("sentence " + std::to_string(s + 1) + " has mismatched token and tag counts");
    }
    for (std::size_t i = 0; i < sent.tags.size(); ++i) {
      auto idx = tagset.index_of(sent.tags[i]);
      if (!idx) {
        throw SchemaError("gold tag '" + sent.tags[i] + "' is not in tagset '" + tagset.name() + "'");
      }
      gold[s].push_back(*idx);
      lowered[s].push_back(lowercase(sent.tokens[i]));
    }
  }

  struct Slot {
    std::vector<double> weight, total;
    std::vector<long long> stamp;
  };
  const std::size_t n_tags = tagset.size();
  std::unordered_map<std::string, Slot> slots;
  long long clock = 0;

  auto bump = [&](const std::string& feature, std::size_t tag, double delta) {
    auto [it, inserted] = slots.try_emplace(feature);
    Slot& slot = it->second;
    if (inserted) {
      slot.weight.assign(n_tags, 0.0);
      slot.total.assign(n_tags, 0.0);
      slot.stamp.assign(n_tags, 0);
    }
    slot.total[tag] += static_cast<double>(clock - slot.stamp[tag]) * slot.weight[tag];
    slot.stamp[tag] = clock;
    slot.weight[tag] += delta;
  };

  TaggerModel model(tagset);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t s : order) {
      const auto& tokens = corpus[s].tokens;
      std::string prev = "-START-", prev2 = "-START2-";
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto features = extract_features(lowered[s], i, tokens[i], prev, prev2);
        std::vector<double> scores(n_tags, 0.0);
        for (const auto& f : features) {
          auto it = slots.find(f);
          if (it == slots.end()) continue;
          for (std::size_t t = 0; t < n_tags; ++t) scores[t] += it->second.weight[t];
        }
        std::size_t guess = 0;
        for (std::size_t t = 1; t < n_tags; ++t) {
          if (scores[t] > scores[guess]) guess = t;
        }
        ++clock;
        const std::size_t truth = gold[s][i];
        if (guess != truth) {
          for (const auto& f : features) {
            bump(f, truth, 1.0);
            bump(f, guess, -1.0);
          }
        }
        prev2 = std::move(prev);
        prev = tagset.tags()[guess];
      }
    }
  }

  for (auto& [feature, slot] : slots) {
    std::vector<double> averaged(n_tags, 0.0);
    bool any = false;
    for (std::size_t t = 0; t < n_tags; ++t) {
      const double total = slot.total[t] + static_cast<double>(clock - slot.stamp[t]) * slot.weight[t];
      averaged[t] = clock > 0 ? total / static_cast<double>(clock) : 0.0;
      any = any || averaged[t] != 0.0;
    }
    if (any) model.weights_.emplace(feature, std::move(averaged));
  }
  if (model.weights_.empty()) {
    // The first tag already explained every token; keep a bias entry so the model counts as trained.
    model.weights_.emplace("bias", std::vector<double>(n_tags, 0.0));
  }
  model.averaged_ = true;
  return model;
}

std::string TaggerModel::serialize() const {
  std::ostringstream out;
  out << kTaggerMagic << '\n';
  out << "tagset " << tagset_.name() << ' ' << tagset_.size() << '\n';
  for (const auto& t : tagset_.tags()) out << t << '\n';
  out << "averaged " << (averaged_ ? 1 : 0) << '\n';
  std::vector<const std::string*> keys;
  keys.reserve(weights_.size());
  for (const auto& [k, v] : weights_) keys.push_back(&k);
  std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return *a < *b; });
  out << "features " << keys.size() << '\n';
  char buf[32];
  for (const auto* k : keys) {
    out << *k;
    for (double w : weights_.at(*k)) {
      std::snprintf(buf, sizeof buf, "%.17g", w);
      out << '\t' << buf;
    }
    out << '\n';
  }
  return out.str();
}

TaggerModel TaggerModel::deserialize(std::string_view content) {
  const auto lines = split_lines(content);
  std::size_t ln = 0;
  auto need = [&](const char* what) -> std::string_view {
    if (ln >= lines.size()) throw ParseError("<tagger>", ln + 1, std::string("missing ") + what);
    return lines[ln++];
  };
  if (need("magic") != kTaggerMagic) throw ParseError("<tagger>", 1, "not a DOQUAL-TAGGER-1 model");

  std::istringstream header{std::string(need("tagset header"))};
  std::string word, name;
  std::size_t n_tags = 0;
  if (!(header >> word >> name >> n_tags) || word != "tagset") {
    throw ParseError("<tagger>", ln, "malformed tagset header");
  }
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < n_tags; ++i) tags.emplace_back(need("tag"));
  TaggerModel model{TagSet(name, std::move(tags))};

  std::istringstream avg{std::string(need("averaged flag"))};
  int flag = 0;
  if (!(avg >> word >> flag) || word != "averaged") throw ParseError("<tagger>", ln, "malformed averaged flag");
  model.averaged_ = flag != 0;

  std::istringstream fh{std::string(need("feature count"))};
  std::size_t n_features = 0;
  if (!(fh >> word >> n_features) || word != "features") throw ParseError("<tagger>", ln, "malformed feature count");
  for (std::size_t i = 0; i < n_features; ++i) {
    const auto line = need("feature row");
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != n_tags + 1) throw ParseError("<tagger>", ln, "feature row has wrong width");
    std::vector<double> w(n_tags);
    for (std::size_t t = 0; t < n_tags; ++t) {
      try {
        w[t] = std::stod(std::string(fields[t + 1]));
      } catch (const std::exception&) {
        throw ParseError("<tagger>", ln, "bad weight '" + std::string(fields[t + 1]) + "'");
      }
    }
    model.weights_.emplace(std::string(fields[0]), std::move(w));
  }
  return model;
}

void TaggerModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize();
}

TaggerModel TaggerModel::load(const std::filesystem::path& path) { return deserialize(read_file(path)); }

std::vector<std::uint8_t> pos_presence_vector(const std::vector<std::string>& tags, const TagSet& tagset) {
  std::vector<std::uint8_t> present(tagset.size(), 0);
  for (const auto& t : tags) {
    auto idx = tagset.index_of(t);
    if (!idx) throw SchemaError("tag '" + t + "' is not in tagset '" + tagset.name() + "'");
    present[*idx] = 1;
  }
  return present;
}

}  // namespace doqual
