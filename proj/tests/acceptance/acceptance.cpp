// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
// usage: doqual_acceptance <path-to-doqual-cli> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "doqual/features.hpp"
#include "doqual/graph.hpp"
#include "doqual/harness.hpp"
#include "doqual/model.hpp"
#include "doqual/readability.hpp"
#include "doqual/synthetic.hpp"
#include "doqual/topics.hpp"

namespace fs = std::filesystem;
using namespace doqual;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  int number;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Outcome readability_oracle() {
  Outcome o;
  struct Case {
    std::size_t words, sentences, letters, chars, complex;
  };
  const std::vector<Case> cases{
      {100, 5, 500, 500, 10}, {100, 10, 400, 400, 0}, {1, 1, 1, 1, 0},    {20, 1, 100, 100, 2},
      {100, 5, 500, 520, 10}, {10, 1, 40, 40, 0},     {5, 1, 25, 31, 5},  {37, 3, 151, 170, 4},
      {250, 12, 1190, 1301, 31}, {3, 2, 9, 11, 1},     {64, 64, 64, 64, 64}, {1000, 1, 9999, 10010, 999},
  };
  for (const auto& c : cases) {
    TextStats s;
    s.word_count = c.words;
    s.sentence_count = c.sentences;
    s.letter_count = c.letters;
    s.character_count = c.chars;
    s.complex_word_count = c.complex;
    const double w = static_cast<double>(c.words), n = static_cast<double>(c.sentences);
    const double cli = 0.0588 * (100.0 * c.letters / w) - 0.296 * (100.0 * n / w) - 15.9;
    const double ari_v = 4.71 * (c.chars / w) + 0.5 * (w / n) - 21.43;
    const double gfi = 0.4 * (w / n + 100.0 * c.complex / w);
    o.require(std::abs(coleman_liau(s) - cli) <= 1e-9, "CLI mismatch at " + std::to_string(c.words) + " words");
    o.require(std::abs(ari(s) - ari_v) <= 1e-9, "ARI mismatch at " + std::to_string(c.words) + " words");
    o.require(std::abs(gunning_fog(s) - gfi) <= 1e-9, "GFI mismatch at " + std::to_string(c.words) + " words");
  }
  o.detail = o.ok ? std::to_string(cases.size()) + " instances" : o.detail;
  return o;
}

Outcome logistic_identities() {
  Outcome o;
  o.require(logistic(0.0) == 0.5, "F(0) != 0.5");
  for (double t : {1.0, 10.0, 100.0}) {
    o.require(std::abs(logistic(t) + logistic(-t) - 1.0) <= 1e-12, "F(t)+F(-t) != 1 at t=" + num(t, 0));
  }
  Rng rng(2718);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng.below(19));
    const auto d = static_cast<Eigen::Index>(1 + rng.below(5));
    Eigen::MatrixXd X(n, d);
    std::vector<int> y(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        X(i, j) = 6.0 * rng.uniform() - 3.0;
        rows[static_cast<std::size_t>(i)].push_back(X(i, j));
      }
      y[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(2));
    }
    const double ridge = 0.1 * rng.uniform();
    std::vector<double> theta(static_cast<std::size_t>(d + 1));
    for (auto& v : theta) v = 2.0 * rng.uniform() - 1.0;
    auto f = [&](const std::vector<double>& th) {
      return oracle::reference_objective(rows, y, {th.begin(), th.end() - 1}, th.back(), ridge);
    };
    const auto fd = oracle::finite_difference(f, theta);
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(theta.data(), d);
    const auto g = logistic_gradient(X, y, w, theta.back(), ridge);
    for (std::size_t k = 0; k < fd.size(); ++k) {
      const double rel = std::abs(g(static_cast<Eigen::Index>(k)) - fd[k]) / std::max(1.0, std::abs(fd[k]));
      worst = std::max(worst, rel);
    }
  }
  o.require(worst <= 1e-5, "gradient relative error " + num(worst, 8));
  if (o.ok) o.detail = "worst gradient relative error " + num(worst * 1e9, 3) + "e-9";
  return o;
}

Outcome separable_training() {
  Outcome o;
  Eigen::MatrixXd X(200, 1);
  std::vector<int> y(200);
  for (int i = 0; i < 200; ++i) {
    X(i, 0) = i % 2 ? 1.0 : -1.0;
    y[static_cast<std::size_t>(i)] = i % 2;
  }
  TrainParams p;
  p.ridge = 1e-8;
  p.max_iter = 500;
  const auto m = train_logistic(X, y, p);
  int right = 0;
  for (int i = 0; i < 200; ++i) {
    const double x = X(i, 0);
    right += m.classify(std::span(&x, 1)) == y[static_cast<std::size_t>(i)];
  }
  o.require(right == 200, "training accuracy " + std::to_string(right) + "/200");
  o.require(m.iterations() <= 500, "used " + std::to_string(m.iterations()) + " iterations");
  if (o.ok) o.detail = "200/200 after " + std::to_string(m.iterations()) + " iterations";
  return o;
}

CitationGraph digraph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  CitationGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(std::to_string(i));
  for (auto [a, b] : edges) g.add_edge(std::to_string(a), std::to_string(b));
  return g;
}

Outcome pagerank_oracle() {
  Outcome o;
  for (double v : pagerank(digraph(3, {{0, 1}, {1, 2}, {2, 0}}))) {
    o.require(std::abs(v - 1.0 / 3.0) <= 1e-6, "3-cycle score " + num(v, 9));
  }
  Rng rng(99);
  std::size_t with_dangling = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t a = 0; a < n; ++a) {
      // Roughly a third of the nodes cite nothing.
      if (rng.uniform() < 0.33) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b && rng.uniform() < 0.2) edges.emplace_back(a, b);
      }
    }
    const auto g = digraph(n, edges);
    for (std::size_t i = 0; i < n; ++i) with_dangling += g.cites(i).empty() ? 1 : 0;
    const auto pr = pagerank(g);
    worst = std::max(worst, std::abs(std::accumulate(pr.begin(), pr.end(), 0.0) - 1.0));
  }
  o.require(worst <= 1e-6, "sum deviates by " + num(worst, 9));
  o.require(with_dangling > 0, "no dangling nodes generated");
  if (o.ok) o.detail = "50 digraphs, " + std::to_string(with_dangling) + " dangling nodes";
  return o;
}

Outcome betweenness_oracle() {
  Outcome o;
  Rng rng(6);
  std::size_t connected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 6, 0.3 + 0.5 * rng.uniform());
    if (!oracle::connected(g)) continue;
    ++connected;
    const auto got = centralities(digraph(g.n, g.edges)).betweenness;
    const auto expected = oracle::brute_force_betweenness(g);
    for (std::size_t i = 0; i < g.n; ++i) {
      o.require(std::abs(got[i] - expected[i]) <= 1e-12,
                "sample " + std::to_string(trial) + " node " + std::to_string(i));
    }
  }
  o.require(connected > 0, "no connected samples");
  if (o.ok) o.detail = std::to_string(connected) + " connected graphs of 100 samples";
  return o;
}

Outcome lda_recovery() {
  Outcome o;
  const auto synth = oracle::disjoint_topic_corpus(60606);
  LdaParams p;
  p.topics = 3;
  p.iterations = 500;
  p.seed = 17;
  p.min_doc_freq = 1;
  const auto a = fit_lda(synth.docs, p);
  const auto b = fit_lda(synth.docs, p);
  std::vector<std::vector<double>> recovered, truth(3, std::vector<double>(a.vocabulary().size(), 0.0));
  for (std::size_t k = 0; k < 3; ++k) {
    recovered.push_back(a.topic_word_distribution(k));
    for (std::size_t w = 0; w < synth.vocab_per_topic; ++w) {
      if (auto id = a.word_id("t" + std::to_string(k) + "w" + std::to_string(w))) truth[k][*id] = 1.0 / 20.0;
    }
  }
  const double cos = oracle::best_matched_cosine(recovered, truth);
  o.require(cos >= 0.9, "matched cosine " + num(cos));
  for (const auto& row : a.doc_topic()) {
    o.require(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-9, "doc_topic row off simplex");
  }
  o.require(a.doc_topic() == b.doc_topic() && a.serialize() == b.serialize(), "rerun differs");
  if (o.ok) o.detail = "matched cosine " + num(cos);
  return o;
}

Dataset planted_tweets(std::size_t n, std::uint64_t seed, SyntheticBundle* bundle_out = nullptr) {
  SyntheticOptions opt;
  opt.kind = DocumentKind::tweet;
  opt.documents = n;
  opt.seed = seed;
  auto bundle = make_synthetic(opt);
  auto labeled = derive_labels(bundle.dataset, {DocumentKind::tweet, std::nullopt});
  if (bundle_out) *bundle_out = std::move(bundle);
  return labeled;
}

Outcome majority_class() {
  Outcome o;
  // Exactly 546 class1 and 454 class2 documents, in corpus order.
  const auto pool = planted_tweets(2500, 546);
  Dataset ds;
  ds.kind = pool.kind;
  std::array<std::size_t, 2> quota{546, 454};
  for (const auto& doc : pool.documents) {
    auto& left = quota[static_cast<std::size_t>(*doc.label)];
    if (left == 0) continue;
    --left;
    ds.documents.push_back(doc);
  }
  o.require(quota[0] == 0 && quota[1] == 0, "planted pool too small");
  const auto counts = ds.label_counts();
  const double share = static_cast<double>(counts[0]) / static_cast<double>(ds.size());
  o.require(counts[0] > counts[1], "class1 is not the majority");
  // An empty lexicon makes the sentiment feature the constant neutral value.
  const auto empty = parse_lexicon("#range=prob\n");
  SuiteResources res;
  res.lexicon = &empty;
  EvalParams params;
  const auto row = evaluate(ds, model_config(3), params, res);
  const double acc = round_half_up(row.metrics.accuracy * 100.0, 2);
  o.require(std::abs(acc - 54.60) <= 0.5, "accuracy " + num(acc, 2));
  o.require(row.metrics.f1[1] == 0.0, "minority F1 " + num(row.metrics.f1[1] * 100.0, 2));
  if (o.ok) {
    o.detail = std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + " (majority " + num(share * 100, 2) +
               "%): accuracy " + format_percent(row.metrics.accuracy) + ", minority F1 " +
               format_percent(row.metrics.f1[1]);
  }
  return o;
}

Outcome planted_ablation() {
  Outcome o;
  SyntheticBundle bundle;
  const auto ds = planted_tweets(5000, 5000, &bundle);
  const auto tagger = train_tagger(bundle.tagged, TagSet::tweet24(), 5, 3);
  const auto lexicon = parse_lexicon(bundle.lexicon_tsv);
  SuiteResources res;
  res.tagger = &tagger;
  res.lexicon = &lexicon;
  EvalParams params;
  const auto report = evaluate_suite(ds, {1, 3, 5, 12}, params, res);
  double acc[17] = {};
  for (const auto& row : report.rows) {
    o.require(!row.failure, "config " + std::to_string(row.config_id) + " failed: " + row.failure.value_or(""));
    acc[row.config_id] = round_half_up(row.metrics.accuracy * 100.0, 2);
  }
  o.require(acc[1] >= 95.0, "config 1 accuracy " + num(acc[1], 2));
  o.require(acc[12] <= acc[5] - 10.0, "config 12 " + num(acc[12], 2) + " vs config 5 " + num(acc[5], 2));
  o.require(acc[5] >= acc[3], "config 5 " + num(acc[5], 2) + " below config 3 " + num(acc[3], 2));
  if (o.ok) {
    o.detail = "accuracy c1 " + num(acc[1], 2) + ", c3 " + num(acc[3], 2) + ", c5 " + num(acc[5], 2) + ", c12 " +
               num(acc[12], 2);
  }
  return o;
}

Outcome fold_partitions() {
  Outcome o;
  Rng rng(1000);
  int tested = 0;
  while (tested < 1000) {
    const int k = 2 + static_cast<int>(rng.below(14));
    const std::size_t n = static_cast<std::size_t>(2 * k) + rng.below(400);
    const double p = 0.05 + 0.9 * rng.uniform();
    std::vector<int> labels(n);
    std::array<std::size_t, 2> count{};
    for (auto& l : labels) ++count[static_cast<std::size_t>(l = rng.uniform() < p)];
    if (count[0] < static_cast<std::size_t>(k) || count[1] < static_cast<std::size_t>(k)) continue;
    ++tested;
    const auto folds = stratified_folds(labels, k, rng.next());
    o.require(folds.size() == static_cast<std::size_t>(k), "wrong fold count");
    std::vector<int> seen(n, 0);
    for (const auto& f : folds) {
      std::array<std::size_t, 2> c{};
      for (auto i : f) {
        ++seen[i];
        ++c[static_cast<std::size_t>(labels[i])];
      }
      for (std::size_t cls = 0; cls < 2; ++cls) {
        const double share = static_cast<double>(count[cls]) / k;
        o.require(std::abs(static_cast<double>(c[cls]) - share) <= 1.0, "fold class count off proportional");
      }
    }
    for (int s : seen) o.require(s == 1, s == 0 ? "index not covered" : "folds overlap");
  }
  if (o.ok) o.detail = "1000 datasets";
  return o;
}

Outcome feature_dimensions() {
  Outcome o;
  std::vector<std::string> seen;
  for (auto kind : {DocumentKind::tweet, DocumentKind::article}) {
    SyntheticOptions opt;
    opt.kind = kind;
    opt.documents = 30;
    const auto bundle = make_synthetic(opt);
    const auto tagset = kind == DocumentKind::tweet ? TagSet::tweet24() : TagSet::penn38();
    const auto tagger = train_tagger(bundle.tagged, tagset, 2, 1);
    const auto lexicon = parse_lexicon(bundle.lexicon_tsv);
    std::vector<std::vector<std::string>> docs;
    for (const auto& d : bundle.dataset.documents) docs.push_back(tokenize(d.text));
    LdaParams lda;
    lda.topics = 30;
    lda.iterations = 2;
    const auto topics = fit_lda(docs, lda);
    const auto venues = VenueCodes::from_dataset(bundle.dataset);
    FeatureResources r;
    r.topics = &topics;
    r.tagger = &tagger;
    r.lexicon = &lexicon;
    r.venues = &venues;
    r.infer_iterations = 2;
    const bool tweet = kind == DocumentKind::tweet;
    // Group widths written out independently of the library.
    const std::map<FeatureGroup, std::size_t> width{
        {FeatureGroup::meta, tweet ? 3u : 10u}, {FeatureGroup::topics5, 5},
        {FeatureGroup::topics30, 30},           {FeatureGroup::pos, tweet ? 24u : 38u},
        {FeatureGroup::length, tweet ? 1u : 3u}, {FeatureGroup::readability, tweet ? 1u : 3u},
        {FeatureGroup::sentiment, tweet ? 1u : 2u}};
    for (int id : {5, 6}) {
      const auto& config = model_config(id);
      std::size_t sum = 0;
      for (auto g : config.groups) sum += width.at(g);
      const auto fv = assemble_features(bundle.dataset.documents[0], config, r);
      const std::size_t expected = tweet ? (id == 5 ? 35 : 60) : (id == 5 ? 61 : 86);
      o.require(fv.values.size() == expected && sum == expected,
                std::string(to_string(kind)) + " config " + std::to_string(id) + " has " +
                    std::to_string(fv.values.size()) + " dims");
      seen.push_back(std::string(to_string(kind)) + "/" + std::to_string(id) + "=" + std::to_string(fv.values.size()));
    }
  }
  if (o.ok) {
    for (const auto& s : seen) o.detail += (o.detail.empty() ? "" : ", ") + s;
  }
  return o;
}

int shell(const std::string& command) { return std::system(command.c_str()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism(const std::string& cli, const fs::path& scratch) {
  Outcome o;
  const fs::path dir = scratch / "e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string q = "\"" + cli + "\"";
  const std::string d = "\"" + dir.string() + "\"";
  o.require(shell(q + " synth --kind tweet --documents 1000 --seed 11 --out " + d + "/data 2>/dev/null") == 0,
            "synth failed");
  if (!o.ok) return o;
  const std::string first = q + " run --kind tweet --corpus " + d + "/data/corpus.jsonl --lexicon " + d +
                            "/data/lexicon.tsv --tagged " + d + "/data/tagged.txt --configs 1-16 --folds 10" +
                            " --seed 7 --out " + d + "/run0 > /dev/null";
  o.require(shell(first) == 0, "initial run failed");
  if (!o.ok) return o;
  for (const char* run : {"run1", "run2"}) {
    o.require(shell(q + " run --manifest " + d + "/run0/manifest.json --out " + d + "/" + run + " > /dev/null") == 0,
              std::string(run) + " failed");
  }
  if (!o.ok) return o;
  const auto a = slurp(dir / "run1" / "report.tsv");
  const auto b = slurp(dir / "run2" / "report.tsv");
  o.require(!a.empty(), "empty report");
  o.require(a == b, "manifest reruns differ");
  o.require(a == slurp(dir / "run0" / "report.tsv"), "manifest rerun differs from the original run");
  if (o.ok) {
    const auto lines = std::count(a.begin(), a.end(), '\n');
    o.detail = std::to_string(lines - 1) + " rows, " + std::to_string(a.size()) + " bytes identical";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: doqual_acceptance <doqual-cli> <scratch-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];

  const std::vector<Criterion> criteria{
      {1, "readability formula oracle", 1, readability_oracle},
      {2, "logistic identity suite", 5, logistic_identities},
      {3, "separable-data training", 2, separable_training},
      {4, "pagerank oracle", 5, pagerank_oracle},
      {5, "betweenness brute-force equivalence", 30, betweenness_oracle},
      {6, "lda recovery", 60, lda_recovery},
      {7, "majority-class degenerate check", 10, majority_class},
      {8, "planted-signal ablation ordering", 300, planted_ablation},
      {9, "fold partition properties", 10, fold_partitions},
      {10, "feature-dimension contract", 1, feature_dimensions},
      {11, "end-to-end determinism", 120, [&] { return cli_determinism(cli, scratch); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.budget_seconds) {
      o.ok = false;
      o.detail = "took " + num(secs, 2) + " s, budget " + num(c.budget_seconds, 0) + " s";
    }
    failures += o.ok ? 0 : 1;
    std::printf("%s  %2d. %-38s %8.3f s  %s\n", o.ok ? "PASS" : "FAIL", c.number, c.name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
