#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "doqual/error.hpp"
#include "doqual/features.hpp"
#include "doqual/graph.hpp"
#include "doqual/harness.hpp"
#include "doqual/ingest.hpp"
#include "doqual/model.hpp"
#include "doqual/pos.hpp"
#include "doqual/random.hpp"
#include "doqual/readability.hpp"
#include "doqual/sentiment.hpp"
#include "doqual/synthetic.hpp"
#include "doqual/textseg.hpp"
#include "doqual/topics.hpp"

namespace py = pybind11;
using namespace doqual;

namespace {

CitationGraph graph_from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                               const std::vector<std::string>& nodes) {
  CitationGraph g;
  for (const auto& n : nodes) g.add_node(n);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["precision"] = std::vector<double>(m.precision.begin(), m.precision.end());
  d["recall"] = std::vector<double>(m.recall.begin(), m.recall.end());
  d["f1"] = std::vector<double>(m.f1.begin(), m.f1.end());
  d["weighted_precision"] = m.weighted_precision;
  d["weighted_recall"] = m.weighted_recall;
  d["weighted_f1"] = m.weighted_f1;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "doqual native core";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<TrainingError>(m, "TrainingError", base.ptr());
  py::register_exception<BalanceError>(m, "BalanceError", base.ptr());
  py::register_exception<FoldError>(m, "FoldError", base.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError", base.ptr());
  py::register_exception<UndefinedInputError>(m, "UndefinedInputError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::enum_<DocumentKind>(m, "DocumentKind")
      .value("tweet", DocumentKind::tweet)
      .value("article", DocumentKind::article);

  py::class_<TextStats>(m, "TextStats")
      .def(py::init<>())
      .def_readwrite("character_count", &TextStats::character_count)
      .def_readwrite("letter_count", &TextStats::letter_count)
      .def_readwrite("word_count", &TextStats::word_count)
      .def_readwrite("sentence_count", &TextStats::sentence_count)
      .def_readwrite("complex_word_count", &TextStats::complex_word_count)
      .def_readwrite("per_word_syllables", &TextStats::per_word_syllables)
      .def("__eq__", [](const TextStats& a, const TextStats& b) { return a == b; });

  m.def("tokenize", &tokenize, py::arg("text"));
  m.def(
      "split_sentences", [](const std::string& text) { return split_sentences(text); }, py::arg("text"));
  m.def("count_syllables", &count_syllables, py::arg("word"));
  m.def(
      "text_stats",
      [](const std::string& text, bool strip) {
        SegmentOptions o;
        o.strip_urls = strip;
        return text_stats(text, o);
      },
      py::arg("text"), py::arg("strip_urls") = false);

  m.def("coleman_liau", &coleman_liau, py::arg("stats"));
  m.def("ari", &ari, py::arg("stats"));
  m.def("gunning_fog", &gunning_fog, py::arg("stats"));
  m.def("readability_features", &readability_features, py::arg("stats"), py::arg("kind"));
  m.def("length_features", &length_features, py::arg("stats"), py::arg("kind"));

  py::class_<TopicModel>(m, "TopicModel")
      .def_property_readonly("topics", &TopicModel::topics)
      .def_property_readonly("alpha", &TopicModel::alpha)
      .def_property_readonly("beta", &TopicModel::beta)
      .def_property_readonly("vocabulary", &TopicModel::vocabulary)
      .def_property_readonly("doc_topic", &TopicModel::doc_topic)
      .def("topic_word_distribution", &TopicModel::topic_word_distribution, py::arg("topic"))
      .def("serialize", &TopicModel::serialize)
      .def_static("deserialize", [](const std::string& s) { return TopicModel::deserialize(s); });
  m.def(
      "fit_lda",
      [](const std::vector<std::vector<std::string>>& corpus, int topics, std::optional<double> alpha, double beta,
         int iterations, std::uint64_t seed, std::size_t min_doc_freq) {
        LdaParams p;
        p.topics = topics;
        p.alpha = alpha;
        p.beta = beta;
        p.iterations = iterations;
        p.seed = seed;
        p.min_doc_freq = min_doc_freq;
        py::gil_scoped_release release;
        return fit_lda(corpus, p);
      },
      py::arg("corpus"), py::arg("topics") = 30, py::arg("alpha") = py::none(), py::arg("beta") = 0.01,
      py::arg("iterations") = 1000, py::arg("seed") = 0, py::arg("min_doc_freq") = 2);
  m.def("infer_doc_topics", &infer_doc_topics, py::arg("model"), py::arg("tokens"), py::arg("iterations") = 100,
        py::arg("seed") = 0);
  m.def("top_k_normalized", &top_k_normalized, py::arg("dist"), py::arg("k") = 5);

  py::class_<SentimentLexicon>(m, "SentimentLexicon")
      .def("lookup", &SentimentLexicon::lookup)
      .def_property_readonly("size", &SentimentLexicon::size)
      .def_property_readonly("neutral", &SentimentLexicon::neutral);
  m.def(
      "parse_lexicon", [](const std::string& s) { return parse_lexicon(s); }, py::arg("content"));
  m.def("tweet_sentiment", &tweet_sentiment, py::arg("tokens"), py::arg("lexicon"));
  m.def(
      "article_sentiment",
      [](const std::vector<std::string>& sentences, const SentimentLexicon& lex) {
        const auto s = article_sentiment(sentences, lex);
        return std::make_pair(s.average, s.maximum);
      },
      py::arg("sentences"), py::arg("lexicon"));

  m.def(
      "pagerank",
      [](const std::vector<std::pair<std::string, std::string>>& edges, const std::vector<std::string>& nodes,
         double damping, double tol, int max_iter) {
        const auto g = graph_from_edges(edges, nodes);
        const auto pr = pagerank(g, {damping, tol, max_iter});
        std::map<std::string, double> out;
        for (std::size_t i = 0; i < g.node_count(); ++i) out[g.ids()[i]] = pr[i];
        return out;
      },
      py::arg("edges"), py::arg("nodes") = std::vector<std::string>{}, py::arg("damping") = 0.85,
      py::arg("tol") = 1e-9, py::arg("max_iter") = 200);
  m.def(
      "centralities",
      [](const std::vector<std::pair<std::string, std::string>>& edges, const std::vector<std::string>& nodes,
         bool normalized) {
        const auto g = graph_from_edges(edges, nodes);
        const auto c = centralities(g, normalized);
        py::dict out;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
          py::dict row;
          row["betweenness"] = c.betweenness[i];
          row["closeness"] = c.closeness[i];
          row["degree"] = c.degree[i];
          out[py::str(g.ids()[i])] = row;
        }
        return out;
      },
      py::arg("edges"), py::arg("nodes") = std::vector<std::string>{}, py::arg("normalized") = false);
  m.def("threshold_label",
        [](double score, double threshold) { return threshold_label(score, threshold) == CitationClass::Y ? "Y" : "A"; });

  m.def("logistic", &logistic, py::arg("t"));
  py::class_<LogisticModel>(m, "LogisticModel")
      .def_property_readonly("weights", &LogisticModel::weights)
      .def_property_readonly("bias", &LogisticModel::bias)
      .def_property_readonly("iterations", &LogisticModel::iterations)
      .def_property_readonly("converged", &LogisticModel::converged)
      .def("predict_proba",
           [](const LogisticModel& model, const std::vector<double>& x) { return model.predict_proba(x); })
      .def("classify", [](const LogisticModel& model, const std::vector<double>& x) { return model.classify(x); })
      .def("serialize", &LogisticModel::serialize)
      .def_static("deserialize", [](const std::string& s) { return LogisticModel::deserialize(s); });
  m.def(
      "train_logistic",
      [](const Eigen::MatrixXd& X, const std::vector<int>& y, double ridge, double tol, int max_iter,
         bool standardize) {
        TrainParams p{ridge, tol, max_iter, standardize};
        py::gil_scoped_release release;
        return train_logistic(X, y, p);
      },
      py::arg("X"), py::arg("y"), py::arg("ridge") = 1e-8, py::arg("tol") = 1e-8, py::arg("max_iter") = 500,
      py::arg("standardize") = false);

  m.def(
      "stratified_folds",
      [](const std::vector<int>& labels, int k, std::uint64_t seed, bool stratify) {
        return stratified_folds(labels, k, seed, stratify);
      },
      py::arg("labels"), py::arg("k") = 10, py::arg("seed") = 42, py::arg("stratify") = true);
  m.def(
      "compute_metrics",
      [](std::size_t tn, std::size_t fp, std::size_t fn, std::size_t tp) {
        Confusion c;
        c.counts = {{{tn, fp}, {fn, tp}}};
        return metrics_dict(compute_metrics(c));
      },
      py::arg("tn"), py::arg("fp"), py::arg("fn"), py::arg("tp"));
  m.def(
      "config_groups",
      [](int id) {
        std::vector<std::string> out;
        for (auto g : model_config(id).groups) out.emplace_back(to_string(g));
        return out;
      },
      py::arg("config_id"));

  m.def(
      "synthesize",
      [](const std::string& kind, std::size_t documents, std::uint64_t seed, double noise) {
        SyntheticOptions o;
        o.kind = parse_document_kind(kind);
        o.documents = documents;
        o.seed = seed;
        o.noise = noise;
        const auto b = make_synthetic(o);
        py::dict d;
        d["corpus"] = serialize_corpus(b.dataset);
        d["tagged"] = serialize_tagged_corpus(b.tagged);
        d["lexicon"] = b.lexicon_tsv;
        d["edges"] = b.edges_tsv;
        d["threshold"] = b.threshold;
        return d;
      },
      py::arg("kind") = "tweet", py::arg("documents") = 1000, py::arg("seed") = 7, py::arg("noise") = 0.1);

  m.def(
      "evaluate",
      [](const std::string& corpus_jsonl, const std::string& kind_name, const std::vector<int>& configs,
         const std::string& lexicon_tsv, const std::string& tagged, int folds, std::uint64_t seed, int topics,
         int lda_iterations, std::optional<double> threshold) {
        const auto kind = parse_document_kind(kind_name);
        auto ds = parse_corpus(corpus_jsonl, kind);
        if (!ds.fully_labeled()) ds = derive_labels(ds, {kind, threshold});
        std::optional<SentimentLexicon> lex;
        if (!lexicon_tsv.empty()) lex = parse_lexicon(lexicon_tsv);
        std::optional<TaggerModel> tagger;
        if (!tagged.empty()) {
          tagger = train_tagger(parse_tagged_corpus(tagged),
                                kind == DocumentKind::tweet ? TagSet::tweet24() : TagSet::penn38(), 5,
                                derive_seed(seed, 0x30000));
        }
        EvalParams p;
        p.folds = folds;
        p.seed = seed;
        p.topics = topics;
        p.lda_iterations = lda_iterations;
        SuiteResources res;
        res.lexicon = lex ? &*lex : nullptr;
        res.tagger = tagger ? &*tagger : nullptr;
        SuiteReport report;
        {
          py::gil_scoped_release release;
          report = evaluate_suite(ds, configs, p, res);
        }
        py::list rows;
        for (const auto& row : report.rows) {
          py::dict r;
          r["config"] = row.config_id;
          r["description"] = row.description;
          r["failure"] = row.failure ? py::cast(*row.failure) : py::none();
          r["metrics"] = metrics_dict(row.metrics);
          rows.append(r);
        }
        return py::make_tuple(rows, format_report_tsv(report));
      },
      py::arg("corpus_jsonl"), py::arg("kind"), py::arg("configs"), py::arg("lexicon") = "",
      py::arg("tagged") = "", py::arg("folds") = 10, py::arg("seed") = 42, py::arg("topics") = 30,
      py::arg("lda_iterations") = 1000, py::arg("threshold") = py::none());
}
