#include "doqual/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string_view>
#include <utility>

#include "doqual/random.hpp"

namespace doqual {

namespace {

struct Lexeme {
  const char* word;
  const char* tag;
};

using Slot = std::vector<Lexeme>;

// Tweet vocabulary, by tag.
const Slot kTweetNouns = {{"coffee", "N"}, {"game", "N"},  {"music", "N"}, {"phone", "N"}, {"city", "N"},
                          {"weekend", "N"}, {"team", "N"}, {"movie", "N"}, {"friend", "N"}, {"night", "N"},
                          {"show", "N"},   {"food", "N"},  {"news", "N"},  {"video", "N"}, {"class", "N"},
                          {"dog", "N"},    {"song", "N"},  {"party", "N"}, {"book", "N"},  {"trip", "N"}};
const Slot kTweetVerbs = {{"love", "V"}, {"watch", "V"}, {"need", "V"}, {"like", "V"},
                          {"play", "V"}, {"see", "V"},   {"eat", "V"},  {"make", "V"},
                          {"want", "V"}, {"hear", "V"},  {"read", "V"}, {"miss", "V"}};
const Slot kTweetAdjs = {{"good", "A"}, {"great", "A"}, {"bad", "A"},   {"happy", "A"},   {"sad", "A"},
                         {"new", "A"},  {"awful", "A"}, {"tired", "A"}, {"amazing", "A"}, {"cool", "A"}};
const Slot kTweetAdvs = {{"really", "R"}, {"so", "R"}, {"very", "R"}, {"just", "R"}, {"never", "R"}};
const Slot kTweetDets = {{"the", "D"}, {"a", "D"}, {"my", "D"}, {"this", "D"}, {"your", "D"}};
const Slot kTweetPros = {{"I", "O"}, {"you", "O"}, {"we", "O"}, {"they", "O"}};
const Slot kTweetPreps = {{"at", "P"}, {"with", "P"}, {"for", "P"}, {"in", "P"}, {"on", "P"}};
const Slot kTweetInts = {{"lol", "!"}, {"wow", "!"}, {"omg", "!"}};
const Slot kTweetConj = {{"and", "&"}, {"but", "&"}};

// Article vocabulary, by tag.
const Slot kArtDets = {{"the", "DT"}, {"a", "DT"}, {"this", "DT"}, {"each", "DT"}};
const Slot kArtAdjs = {{"novel", "JJ"},  {"robust", "JJ"},   {"statistical", "JJ"}, {"efficient", "JJ"},
                       {"poor", "JJ"},   {"standard", "JJ"}, {"large", "JJ"},       {"annotated", "JJ"},
                       {"neural", "JJ"}, {"simple", "JJ"}};
const Slot kArtNouns = {{"model", "NN"},     {"method", "NN"},  {"parser", "NN"}, {"corpus", "NN"},
                        {"approach", "NN"},  {"algorithm", "NN"}, {"system", "NN"}, {"baseline", "NN"},
                        {"translation", "NN"}, {"evaluation", "NN"}};
const Slot kArtPlural = {{"results", "NNS"}, {"experiments", "NNS"}, {"features", "NNS"},
                         {"models", "NNS"},  {"sentences", "NNS"},   {"errors", "NNS"}};
const Slot kArtVbz = {{"improves", "VBZ"}, {"outperforms", "VBZ"}, {"uses", "VBZ"},
                      {"requires", "VBZ"}, {"fails", "VBZ"},       {"reduces", "VBZ"}};
const Slot kArtVbp = {{"propose", "VBP"}, {"evaluate", "VBP"}, {"present", "VBP"}, {"describe", "VBP"}};
const Slot kArtPreps = {{"on", "IN"}, {"of", "IN"}, {"for", "IN"}, {"with", "IN"}};
const Slot kArtAdvs = {{"significantly", "RB"}, {"substantially", "RB"}, {"rarely", "RB"}};
const Slot kArtPron = {{"We", "PRP"}};
const Slot kArtConj = {{"and", "CC"}};

const std::vector<std::vector<const Slot*>> kTweetTemplates = {
    {&kTweetPros, &kTweetVerbs, &kTweetDets, &kTweetNouns, &kTweetPreps, &kTweetDets, &kTweetNouns},
    {&kTweetDets, &kTweetAdjs, &kTweetNouns, &kTweetAdvs, &kTweetAdjs},
    {&kTweetPros, &kTweetAdvs, &kTweetVerbs, &kTweetDets, &kTweetAdjs, &kTweetNouns},
    {&kTweetInts, &kTweetPros, &kTweetVerbs, &kTweetNouns, &kTweetConj, &kTweetVerbs, &kTweetDets, &kTweetNouns},
    {&kTweetDets, &kTweetNouns, &kTweetPreps, &kTweetDets, &kTweetNouns, &kTweetAdvs, &kTweetAdjs},
};

const std::vector<std::vector<const Slot*>> kArticleTemplates = {
    {&kArtPron, &kArtVbp, &kArtDets, &kArtAdjs, &kArtNouns, &kArtPreps, &kArtAdjs, &kArtPlural},
    {&kArtDets, &kArtAdjs, &kArtNouns, &kArtAdvs, &kArtVbz, &kArtDets, &kArtNouns},
    {&kArtDets, &kArtNouns, &kArtVbz, &kArtAdjs, &kArtPlural, &kArtConj, &kArtAdjs, &kArtPlural},
    {&kArtPron, &kArtVbp, &kArtPlural, &kArtPreps, &kArtDets, &kArtAdjs, &kArtNouns},
    {&kArtDets, &kArtAdjs, &kArtNouns, &kArtVbz, &kArtDets, &kArtNouns, &kArtPreps, &kArtPlural},
};

constexpr std::pair<const char*, double> kTweetLexicon[] = {
    {"good", 0.85}, {"great", 0.9}, {"happy", 0.88}, {"amazing", 0.93}, {"love", 0.86}, {"cool", 0.75},
    {"bad", 0.12},  {"sad", 0.15},  {"awful", 0.08}, {"tired", 0.3},    {"miss", 0.35}, {"lol", 0.7}};

constexpr std::pair<const char*, double> kArticleLexicon[] = {
    {"novel", 0.3},      {"robust", 0.6},   {"efficient", 0.5}, {"poor", -0.6},          {"improves", 0.4},
    {"outperforms", 0.5}, {"fails", -0.5},  {"errors", -0.3},   {"significantly", 0.2},  {"simple", 0.1},
    {"rarely", -0.1}};

double normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument positive.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

TaggedSentence sample_sentence(const std::vector<std::vector<const Slot*>>& templates, Rng& rng) {
  const auto& tpl = templates[rng.below(templates.size())];
  TaggedSentence s;
  for (const Slot* slot : tpl) {
    const auto& lex = (*slot)[rng.below(slot->size())];
    s.tokens.emplace_back(lex.word);
    s.tags.emplace_back(lex.tag);
  }
  return s;
}

std::string render(const TaggedSentence& s, char terminal) {
  std::string out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (i) out += ' ';
    std::string w = s.tokens[i];
    if (i == 0 && !w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    out += w;
  }
  out += terminal;
  return out;
}

std::string num(double v) {
  char buf[40];
  const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
  return std::string(buf, end);
}

}  // namespace

std::string serialize_tagged_corpus(const std::vector<TaggedSentence>& corpus) {
  std::string out;
  for (const auto& s : corpus) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i) out += ' ';
      out += s.tokens[i] + "_" + s.tags[i];
    }
    out += '\n';
  }
  return out;
}

SyntheticBundle make_synthetic(const SyntheticOptions& options) {
  SyntheticBundle bundle;
  bundle.dataset.kind = options.kind;
  Rng rng(options.seed);
  const bool tweet = options.kind == DocumentKind::tweet;
  const auto& templates = tweet ? kTweetTemplates : kArticleTemplates;

  for (int i = 0; i < 200; ++i) bundle.tagged.push_back(sample_sentence(templates, rng));

  bundle.lexicon_tsv = tweet ? "#range=prob\n" : "#range=polarity\n";
  if (tweet) {
    for (const auto& [w, v] : kTweetLexicon) bundle.lexicon_tsv += std::string(w) + "\t" + num(v) + "\n";
  } else {
    for (const auto& [w, v] : kArticleLexicon) bundle.lexicon_tsv += std::string(w) + "\t" + num(v) + "\n";
  }

  static const char* venues[] = {"ACL", "EMNLP", "NAACL", "COLING", "LREC"};
  // Planted thresholds on the log scale.
  const double tweet_cut = 6.3;
  const double article_cut = std::log(5.0);
  bundle.threshold = 1e-4 * std::exp(article_cut);

  for (std::size_t d = 0; d < options.documents; ++d) {
    Document doc;
    doc.kind = options.kind;
    char id[32];
    std::snprintf(id, sizeof id, tweet ? "t%06zu" : "P%05zu", d);
    doc.id = id;

    const std::size_t sentences = tweet ? 1 + rng.below(2) : 3 + rng.below(6);
    for (std::size_t s = 0; s < sentences; ++s) {
      if (s) doc.text += ' ';
      const char terminal = tweet && rng.below(3) == 0 ? '!' : '.';
      doc.text += render(sample_sentence(templates, rng), terminal);
    }
    if (tweet && rng.below(4) == 0) doc.text += " @friend" + std::to_string(rng.below(100));
    if (tweet && rng.below(5) == 0) doc.text += " http://t.co/x" + std::to_string(rng.below(1000));

    if (tweet) {
      const double log_followers = 6.0 + 1.5 * normal(rng);
      doc.meta["followers"] = std::round(std::exp(log_followers));
      doc.meta["favorites"] = std::round(std::exp(3.0 + normal(rng)));
      doc.meta["statuses"] = std::round(std::exp(7.0 + normal(rng)));
      const bool retweeted = std::log(std::max(1.0, std::round(std::exp(log_followers)))) +
                                 options.noise * normal(rng) > tweet_cut;
      doc.label_raw = retweeted ? static_cast<double>(1 + rng.below(50)) : 0.0;
    } else {
      const double log_in = 1.5 + normal(rng);
      const double max_in = static_cast<double>(options.documents > 0 ? options.documents - 1 : 0);
      const double in_citations = std::min(std::round(std::exp(log_in)), max_in);
      doc.meta["in_citations"] = in_citations;
      doc.meta["out_citations"] = std::round(std::exp(2.5 + 0.5 * normal(rng)));
      doc.meta["author_in_citations"] = std::round(std::exp(3.0 + normal(rng)));
      doc.meta["author_out_citations"] = std::round(std::exp(3.0 + normal(rng)));
      doc.meta["author_pagerank"] = 1e-5 * std::exp(normal(rng));
      doc.meta["year"] = static_cast<double>(2000 + rng.below(14));
      doc.meta["venue"] = std::string(venues[rng.below(5)]);
      doc.meta["betweenness"] = std::round(100.0 * std::exp(normal(rng)));
      doc.meta["closeness"] = 0.1 + 0.2 * rng.uniform();
      doc.meta["degree"] = std::round(std::exp(2.8 + 0.5 * normal(rng)));
      const double log_signal = std::log(std::max(1.0, in_citations)) + options.noise * normal(rng);
      doc.label_raw = 1e-4 * std::exp(log_signal);
    }
    bundle.dataset.documents.push_back(std::move(doc));
  }

  // Citation edges realize each paper's planted in-citation count, so a
  // graph built from edges_tsv agrees with the meta columns it overrides.
  if (!tweet && options.documents > 1) {
    auto& docs = bundle.dataset.documents;
    std::vector<std::size_t> out_degree(docs.size(), 0);
    std::vector<std::size_t> sources;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const auto wanted = static_cast<std::size_t>(std::get<double>(docs[d].meta.at("in_citations")));
      sources.clear();
      while (sources.size() < wanted) {
        const auto src = static_cast<std::size_t>(rng.below(docs.size()));
        if (src == d || std::find(sources.begin(), sources.end(), src) != sources.end()) continue;
        sources.push_back(src);
      }
      for (auto src : sources) {
        ++out_degree[src];
        bundle.edges_tsv += docs[src].id + "\t" + docs[d].id + "\n";
      }
    }
    for (std::size_t d = 0; d < docs.size(); ++d) docs[d].meta["out_citations"] = static_cast<double>(out_degree[d]);
  }
  return bundle;
}

}  // namespace doqual
