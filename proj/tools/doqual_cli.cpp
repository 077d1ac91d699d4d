// doqual command line: corpus preparation, sub-model training and the
// cross-validated ablation suite.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "doqual/error.hpp"
#include "doqual/features.hpp"
#include "doqual/graph.hpp"
#include "doqual/harness.hpp"
#include "doqual/ingest.hpp"
#include "doqual/pos.hpp"
#include "doqual/random.hpp"
#include "doqual/readability.hpp"
#include "doqual/sentiment.hpp"
#include "doqual/synthetic.hpp"
#include "doqual/textseg.hpp"
#include "doqual/topics.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace doqual;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DOQUAL_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParameterError(std::string("DOQUAL_SEED is not an unsigned integer: ") + env);
    }
  }
  return 42;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

// Writes to `path`, or stdout when it is empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Common {
  std::string corpus;
  std::string kind = "tweet";
  std::string out;
  std::uint64_t seed = 0;
  bool strip_urls = false;
};

struct RunOptions {
  std::string manifest;
  std::string configs = "1-16";
  int folds = 10;
  double ridge = 1e-8;
  int topics = 30;
  int top_k = 5;
  int lda_iterations = 1000;
  int infer_iterations = 100;
  std::optional<double> threshold;
  std::optional<double> balance;
  std::string lexicon, tagset, tagger, tagged, edges, authors, topic_model;
  int tagger_epochs = 5;
  bool global_topics = false;
  bool no_stratify = false;
  bool venue_onehot = false;
  bool standardize = false;
};

Dataset labeled_corpus(const Dataset& raw, std::optional<double> threshold) {
  if (raw.fully_labeled()) return raw;
  return derive_labels(raw, {raw.kind, threshold});
}

int cmd_stats(const Common& c) {
  const auto kind = parse_document_kind(c.kind);
  const auto ds = load_corpus(c.corpus, kind);
  SegmentOptions seg;
  seg.strip_urls = c.strip_urls;
  std::string out = "id\twords\tsentences\tcharacters\tletters\tcomplex_words\tcli\tari\tgfi\n";
  for (const auto& d : ds.documents) {
    const auto s = text_stats(d.text, seg);
    out += d.id + '\t' + std::to_string(s.word_count) + '\t' + std::to_string(s.sentence_count) + '\t' +
           std::to_string(s.character_count) + '\t' + std::to_string(s.letter_count) + '\t' +
           std::to_string(s.complex_word_count);
    try {
      const auto r = readability_scores(s);
      out += '\t' + fmt(r.cli) + '\t' + fmt(r.ari) + '\t' + fmt(r.gfi) + '\n';
    } catch (const UndefinedInputError&) {
      out += "\tNA\tNA\tNA\n";
    }
  }
  emit(c.out, out);
  return 0;
}

int cmd_train_lda(const Common& c, const RunOptions& r, std::optional<double> alpha, double beta,
                  std::size_t min_df) {
  const auto ds = load_corpus(c.corpus, parse_document_kind(c.kind));
  SegmentOptions seg;
  seg.strip_urls = c.strip_urls;
  std::vector<std::vector<std::string>> docs;
  for (const auto& d : ds.documents) docs.push_back(tokenize(seg.strip_urls ? strip_urls(d.text) : d.text));
  LdaParams p;
  p.topics = r.topics;
  p.alpha = alpha;
  p.beta = beta;
  p.iterations = r.lda_iterations;
  p.seed = c.seed;
  p.min_doc_freq = min_df;
  const auto model = fit_lda(docs, p);
  if (c.out.empty()) throw ParameterError("train-lda needs --out");
  model.save(c.out);
  std::cerr << "fitted " << model.topics() << " topics over " << model.vocabulary().size() << " words\n";
  return 0;
}

int cmd_train_tagger(const Common& c, const RunOptions& r) {
  if (r.tagged.empty()) throw ParameterError("train-tagger needs --tagged");
  if (c.out.empty()) throw ParameterError("train-tagger needs --out");
  const auto corpus = load_tagged_corpus(r.tagged);
  const auto tagset = resolve_tagset(r.tagset.empty() ? std::string("penn38") : r.tagset);
  const auto model = train_tagger(corpus, tagset, r.tagger_epochs, c.seed);
  model.save(c.out);
  std::cerr << "trained on " << corpus.size() << " sentences with tagset " << tagset.name() << "\n";
  return 0;
}

int cmd_graph(const Common& c, const RunOptions& r, bool normalized) {
  if (r.edges.empty()) throw ParameterError("graph needs --edges");
  const auto g = load_edge_list(r.edges);
  const auto s = node_scores(g, {}, normalized);
  std::unordered_map<std::string, AuthorFeatures> authors;
  if (!r.authors.empty()) authors = author_features(g, load_authorship(r.authors));
  std::string out = "id\tpagerank\tbetweenness\tcloseness\tdegree\tin_citations\tout_citations";
  if (!r.authors.empty()) out += "\tauthor_in_citations\tauthor_out_citations\tauthor_pagerank";
  out += '\n';
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    out += g.ids()[i] + '\t' + fmt(s.pagerank[i]) + '\t' + fmt(s.betweenness[i]) + '\t' + fmt(s.closeness[i]) +
           '\t' + std::to_string(s.degree[i]) + '\t' + std::to_string(s.in_citations[i]) + '\t' +
           std::to_string(s.out_citations[i]);
    if (!r.authors.empty()) {
      auto it = authors.find(g.ids()[i]);
      if (it == authors.end()) {
        out += "\tNA\tNA\tNA";
      } else {
        out += '\t' + fmt(it->second.in_citations) + '\t' + fmt(it->second.out_citations) + '\t' +
               fmt(it->second.pagerank);
      }
    }
    out += '\n';
  }
  emit(c.out, out);
  return 0;
}

int cmd_label(const Common& c, const RunOptions& r) {
  const auto kind = parse_document_kind(c.kind);
  const auto ds = derive_labels(load_corpus(c.corpus, kind), {kind, r.threshold});
  emit(c.out, serialize_corpus(ds));
  const auto counts = ds.label_counts();
  std::cerr << label_name(kind, Label::negative) << '=' << counts[0] << ' ' << label_name(kind, Label::positive)
            << '=' << counts[1] << '\n';
  return 0;
}

int cmd_balance(const Common& c, const RunOptions& r) {
  const auto kind = parse_document_kind(c.kind);
  const auto ds = labeled_corpus(load_corpus(c.corpus, kind), r.threshold);
  const auto out = balance(ds, r.balance.value_or(default_majority_fraction(kind)), c.seed);
  emit(c.out, serialize_corpus(out));
  const auto counts = out.label_counts();
  std::cerr << label_name(kind, Label::negative) << '=' << counts[0] << ' ' << label_name(kind, Label::positive)
            << '=' << counts[1] << '\n';
  return 0;
}

// Fills unset inputs from a previous run's manifest.
json apply_manifest(const std::string& text, Common& c, RunOptions& r, EvalParams& params, bool seed_given,
                    bool configs_given) {
  const auto m = json::parse(text);
  const auto seed_before = params.seed;
  params = eval_params_from_manifest(text);
  if (seed_given) params.seed = seed_before;
  if (!configs_given && m.contains("configs")) {
    std::string list;
    for (const auto& id : m["configs"]) list += (list.empty() ? "" : ",") + std::to_string(id.get<int>());
    r.configs = list;
  }
  if (m.contains("kind")) c.kind = m["kind"].get<std::string>();
  if (!m.contains("inputs")) return m;
  const auto& in = m["inputs"];
  auto fill = [&](std::string& field, const char* key) {
    if (field.empty() && in.contains(key)) field = in[key].get<std::string>();
  };
  fill(c.corpus, "corpus");
  fill(r.lexicon, "lexicon");
  fill(r.tagset, "tagset");
  fill(r.tagger, "tagger");
  fill(r.tagged, "tagged");
  fill(r.edges, "edges");
  fill(r.authors, "authors");
  fill(r.topic_model, "topic_model");
  if (!r.threshold && in.contains("threshold")) r.threshold = std::stod(in["threshold"].get<std::string>());
  if (!r.balance && in.contains("balance")) r.balance = std::stod(in["balance"].get<std::string>());
  if (in.contains("tagger_epochs")) r.tagger_epochs = std::stoi(in["tagger_epochs"].get<std::string>());
  return m;
}

int cmd_run(Common c, RunOptions r, bool seed_given, const CLI::App& sub) {
  EvalParams params;
  params.seed = c.seed;
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  json previous;
  if (!r.manifest.empty()) {
    previous = apply_manifest(read_file(r.manifest), c, r, params, seed_given, given("--configs"));
  }
  // Explicit flags win over the manifest.
  if (r.manifest.empty() || given("--folds")) params.folds = r.folds;
  if (r.manifest.empty() || given("--ridge")) params.logistic.ridge = r.ridge;
  if (r.manifest.empty() || given("--topics")) params.topics = r.topics;
  if (r.manifest.empty() || given("--top-k")) params.top_k = r.top_k;
  if (r.manifest.empty() || given("--lda-iterations")) params.lda_iterations = r.lda_iterations;
  if (r.manifest.empty() || given("--infer-iterations")) params.infer_iterations = r.infer_iterations;
  if (r.manifest.empty() || given("--global-topics")) {
    params.topic_scope = r.global_topics ? TopicScope::global : TopicScope::per_fold;
  }
  if (r.manifest.empty() || given("--no-stratify")) params.stratify = !r.no_stratify;
  if (r.manifest.empty() || given("--venue-onehot")) {
    params.venue_encoding = r.venue_onehot ? VenueEncoding::onehot : VenueEncoding::index;
  }
  if (r.manifest.empty() || given("--strip-urls")) params.segment.strip_urls = c.strip_urls;
  if (r.manifest.empty() || given("--standardize")) params.logistic.standardize = r.standardize;

  if (c.corpus.empty()) throw ParameterError("run needs --corpus (or a manifest naming one)");
  if (c.out.empty()) throw ParameterError("run needs --out");
  const auto kind = parse_document_kind(c.kind);
  Dataset ds = labeled_corpus(load_corpus(c.corpus, kind), r.threshold);
  if (r.balance) ds = balance(ds, *r.balance, params.seed);
  if (previous.contains("corpus_checksum_fnv1a64")) {
    char checksum[17];
    std::snprintf(checksum, sizeof checksum, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize_corpus(ds))));
    if (previous["corpus_checksum_fnv1a64"].get<std::string>() != checksum) {
      std::cerr << "warning: corpus differs from the one recorded in " << r.manifest << '\n';
    }
  }

  std::map<std::string, std::string> inputs;
  auto record = [&](const char* key, const std::string& value) {
    if (value.empty()) return;
    // Tagset names are not paths.
    const bool builtin = std::string_view(key) == "tagset" && (value == "penn38" || value == "tweet24");
    inputs[key] = builtin ? value : fs::absolute(value).lexically_normal().string();
  };
  record("corpus", c.corpus);

  std::optional<TagSet> tagset;
  if (!r.tagset.empty()) tagset = resolve_tagset(r.tagset);
  std::optional<TaggerModel> tagger;
  if (!r.tagger.empty()) {
    tagger = TaggerModel::load(r.tagger);
  } else if (!r.tagged.empty()) {
    const auto ts = tagset ? *tagset : (kind == DocumentKind::tweet ? TagSet::tweet24() : TagSet::penn38());
    tagger = train_tagger(load_tagged_corpus(r.tagged), ts, r.tagger_epochs, derive_seed(params.seed, 0x30000));
    inputs["tagger_epochs"] = std::to_string(r.tagger_epochs);
  }
  std::optional<SentimentLexicon> lexicon;
  if (!r.lexicon.empty()) lexicon = load_lexicon(r.lexicon);
  std::optional<ArticleNetwork> network;
  if (!r.edges.empty()) {
    const auto g = load_edge_list(r.edges);
    if (!r.authors.empty()) {
      const auto authorship = load_authorship(r.authors);
      network = build_article_network(g, &authorship);
    } else {
      network = build_article_network(g);
    }
  }
  std::optional<TopicModel> topic_model;
  if (!r.topic_model.empty()) topic_model = TopicModel::load(r.topic_model);

  record("lexicon", r.lexicon);
  record("tagset", r.tagset);
  record("tagger", r.tagger);
  record("tagged", r.tagged);
  record("edges", r.edges);
  record("authors", r.authors);
  record("topic_model", r.topic_model);
  if (r.threshold) inputs["threshold"] = fmt(*r.threshold);
  if (r.balance) inputs["balance"] = fmt(*r.balance);

  SuiteResources res;
  res.tagger = tagger ? &*tagger : nullptr;
  res.tagset = tagset ? &*tagset : nullptr;
  res.lexicon = lexicon ? &*lexicon : nullptr;
  res.network = network ? &*network : nullptr;
  res.topics = topic_model ? &*topic_model : nullptr;

  const auto report = run_suite(ds, parse_config_list(r.configs), params, res, c.out, inputs);
  std::cout << format_report_table(report, kind);
  return 0;
}

int cmd_report(const Common& c, bool tsv) {
  if (c.out.empty()) throw ParameterError("report needs --out pointing at a run directory");
  std::cout << read_file(fs::path(c.out) / (tsv ? "report.tsv" : "report.txt"));
  return 0;
}

int cmd_synth(const Common& c, std::size_t documents, double noise) {
  if (c.out.empty()) throw ParameterError("synth needs --out");
  SyntheticOptions o;
  o.kind = parse_document_kind(c.kind);
  o.documents = documents;
  o.seed = c.seed;
  o.noise = noise;
  const auto b = make_synthetic(o);
  const fs::path dir = c.out;
  write_file(dir / "corpus.jsonl", serialize_corpus(b.dataset));
  write_file(dir / "tagged.txt", serialize_tagged_corpus(b.tagged));
  write_file(dir / "lexicon.tsv", b.lexicon_tsv);
  if (o.kind == DocumentKind::article) {
    write_file(dir / "edges.tsv", b.edges_tsv);
    write_file(dir / "threshold.txt", fmt(b.threshold) + "\n");
  }
  std::cerr << "wrote " << b.dataset.size() << " documents to " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doqual: document quality prediction with feature ablations"};
  app.require_subcommand(1);

  Common c;
  RunOptions r;
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t min_df = 2;
  bool normalized = false;
  bool tsv = false;
  std::size_t documents = 1000;
  double noise = 0.1;

  auto add_common = [&](CLI::App* s, bool corpus) {
    if (corpus) s->add_option("--corpus", c.corpus, "JSON-lines corpus");
    s->add_option("--kind", c.kind, "tweet or article")->check(CLI::IsMember({"tweet", "article"}));
    s->add_option("--out", c.out, "output path");
    s->add_option("--seed", c.seed, "random seed (default $DOQUAL_SEED or 42)");
    s->add_flag("--strip-urls", c.strip_urls, "drop URLs and @mentions before segmentation");
  };

  auto* stats = app.add_subcommand("stats", "per-document text statistics and readability");
  add_common(stats, true);
  stats->get_option("--corpus")->required();

  auto* lda = app.add_subcommand("train-lda", "fit a topic model on a corpus");
  add_common(lda, true);
  lda->get_option("--corpus")->required();
  lda->add_option("--topics", r.topics, "number of topics");
  lda->add_option("--iterations", r.lda_iterations, "Gibbs sweeps");
  lda->add_option("--alpha", alpha, "document concentration (default 50/topics)");
  lda->add_option("--beta", beta, "topic concentration");
  lda->add_option("--min-doc-freq", min_df, "minimum document frequency for the vocabulary");

  auto* tag = app.add_subcommand("train-tagger", "train the part-of-speech tagger");
  add_common(tag, false);
  tag->add_option("--tagged", r.tagged, "word_TAG training corpus")->required();
  tag->add_option("--tagset", r.tagset, "penn38, tweet24 or a tagset file");
  tag->add_option("--epochs", r.tagger_epochs, "training epochs");

  auto* graph = app.add_subcommand("graph", "citation graph scores");
  add_common(graph, false);
  graph->add_option("--edges", r.edges, "citation edge list")->required();
  graph->add_option("--authors", r.authors, "paper/author table");
  graph->add_flag("--normalized", normalized, "normalize betweenness");

  auto* label = app.add_subcommand("label", "derive class labels");
  add_common(label, true);
  label->get_option("--corpus")->required();
  label->add_option("--threshold", r.threshold, "article PageRank threshold");

  auto* bal = app.add_subcommand("balance", "downsample the majority class");
  add_common(bal, true);
  bal->get_option("--corpus")->required();
  bal->add_option("--target", r.balance, "majority fraction after balancing (default per kind)");
  bal->add_option("--threshold", r.threshold, "article PageRank threshold for unlabeled corpora");

  auto* run = app.add_subcommand("run", "cross-validated ablation suite");
  add_common(run, true);
  run->add_option("--manifest", r.manifest, "replay the parameters and inputs of a previous run");
  run->add_option("--configs", r.configs, "config ids, e.g. 1-16 or 1,3,5-7");
  run->add_option("--folds", r.folds, "cross-validation folds");
  run->add_option("--ridge", r.ridge, "L2 penalty");
  run->add_option("--topics", r.topics, "LDA topics");
  run->add_option("--top-k", r.top_k, "topics kept for the top-k feature");
  run->add_option("--lda-iterations", r.lda_iterations, "Gibbs sweeps per fit");
  run->add_option("--infer-iterations", r.infer_iterations, "fold-in sweeps per document");
  run->add_option("--threshold", r.threshold, "article PageRank threshold");
  run->add_option("--balance", r.balance, "balance to this majority fraction first");
  run->add_option("--lexicon", r.lexicon, "sentiment lexicon");
  run->add_option("--tagset", r.tagset, "penn38, tweet24 or a tagset file");
  run->add_option("--tagger", r.tagger, "trained tagger model");
  run->add_option("--tagged", r.tagged, "train a tagger from this word_TAG corpus");
  run->add_option("--tagger-epochs", r.tagger_epochs, "epochs when training from --tagged");
  run->add_option("--edges", r.edges, "citation edge list");
  run->add_option("--authors", r.authors, "paper/author table");
  run->add_option("--topic-model", r.topic_model, "use a fitted topic model instead of fitting");
  run->add_flag("--global-topics", r.global_topics, "fit one topic model on all documents");
  run->add_flag("--no-stratify", r.no_stratify, "plain k-fold splits");
  run->add_flag("--venue-onehot", r.venue_onehot, "one-hot venue encoding");
  run->add_flag("--standardize", r.standardize, "standardize features on training folds");

  auto* rep = app.add_subcommand("report", "print the table of a finished run");
  rep->add_option("--out", c.out, "run directory")->required();
  rep->add_flag("--tsv", tsv, "print the TSV instead");

  auto* synth = app.add_subcommand("synth", "write a planted-signal synthetic corpus");
  add_common(synth, false);
  synth->add_option("--documents", documents, "number of documents");
  synth->add_option("--noise", noise, "label noise");

  CLI11_PARSE(app, argc, argv);

  try {
    auto* active = app.get_subcommands().front();
    const bool seed_given = active->get_option_no_throw("--seed") && active->count("--seed") > 0;
    if (!seed_given) c.seed = default_seed();
    if (active == stats) return cmd_stats(c);
    if (active == lda) return cmd_train_lda(c, r, alpha, beta, min_df);
    if (active == tag) return cmd_train_tagger(c, r);
    if (active == graph) return cmd_graph(c, r, normalized);
    if (active == label) return cmd_label(c, r);
    if (active == bal) return cmd_balance(c, r);
    if (active == run) return cmd_run(c, r, seed_given, *run);
    if (active == rep) return cmd_report(c, tsv);
    if (active == synth) return cmd_synth(c, documents, noise);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
