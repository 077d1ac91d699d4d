#include <doctest.h>

#include <numeric>

#include "../support/oracles.hpp"
#include "doqual/error.hpp"
#include "doqual/topics.hpp"

using namespace doqual;
using Doc = std::vector<std::string>;

namespace {

LdaParams params(int k, int iterations, std::uint64_t seed) {
  LdaParams p;
  p.topics = k;
  p.iterations = iterations;
  p.seed = seed;
  p.min_doc_freq = 1;
  return p;
}

double row_sum(const std::vector<double>& r) { return std::accumulate(r.begin(), r.end(), 0.0); }

std::vector<std::vector<double>> true_topic_word(const oracle::SyntheticTopics& s, const TopicModel& m) {
  std::vector<std::vector<double>> truth(s.topics, std::vector<double>(m.vocabulary().size(), 0.0));
  for (std::size_t k = 0; k < s.topics; ++k) {
    for (std::size_t w = 0; w < s.vocab_per_topic; ++w) {
      const auto id = m.word_id("t" + std::to_string(k) + "w" + std::to_string(w));
      if (id) truth[k][*id] = 1.0 / static_cast<double>(s.vocab_per_topic);
    }
  }
  return truth;
}

}  // namespace

TEST_CASE("zero-iteration fit still yields simplex rows") {
  const auto m = fit_lda({{"a", "b", "c"}}, params(2, 0, 1));
  REQUIRE(m.doc_topic().size() == 1);
  CHECK(row_sum(m.doc_topic()[0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_lda parameter errors") {
  CHECK_THROWS_AS(fit_lda({}, params(3, 10, 1)), ParameterError);
  CHECK_THROWS_AS(fit_lda({{"a"}}, params(1, 10, 1)), ParameterError);
  CHECK_THROWS_AS(fit_lda({{"a"}}, params(2, -1, 1)), ParameterError);
}

TEST_CASE("disjoint vocabularies are recovered") {
  const auto synth = oracle::disjoint_topic_corpus(2024);
  const auto m = fit_lda(synth.docs, params(3, 500, 11));
  std::vector<std::vector<double>> recovered;
  for (std::size_t k = 0; k < 3; ++k) recovered.push_back(m.topic_word_distribution(k));
  CHECK(oracle::best_matched_cosine(recovered, true_topic_word(synth, m)) >= 0.9);
  for (const auto& row : m.doc_topic()) CHECK(std::abs(row_sum(row) - 1.0) < 1e-9);

  SUBCASE("fold-in puts the generating topic on top") {
    // Map each true topic to the recovered topic holding most of its words.
    std::vector<std::size_t> map(3);
    for (std::size_t k = 0; k < 3; ++k) {
      double best = -1.0;
      for (std::size_t j = 0; j < 3; ++j) {
        double mass = 0.0;
        for (std::size_t w = 0; w < 20; ++w) {
          mass += recovered[j][*m.word_id("t" + std::to_string(k) + "w" + std::to_string(w))];
        }
        if (mass > best) best = mass, map[k] = j;
      }
    }
    for (std::size_t d = 0; d < 6; ++d) {
      const auto theta = infer_doc_topics(m, synth.docs[d], 50, d);
      const auto top = static_cast<std::size_t>(std::max_element(theta.begin(), theta.end()) - theta.begin());
      CHECK(top == map[synth.truth[d]]);
      CHECK(row_sum(theta) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("same seed gives bit-identical state") {
  const auto synth = oracle::disjoint_topic_corpus(5, 20, 30);
  const auto a = fit_lda(synth.docs, params(3, 50, 99));
  const auto b = fit_lda(synth.docs, params(3, 50, 99));
  CHECK(a.doc_topic() == b.doc_topic());
  CHECK(a.topic_word_counts() == b.topic_word_counts());
  CHECK(a.serialize() == b.serialize());
}

TEST_CASE("tokens are conserved across sweeps") {
  const auto synth = oracle::disjoint_topic_corpus(8, 15, 20);
  std::int64_t tokens = 0;
  for (const auto& d : synth.docs) tokens += static_cast<std::int64_t>(d.size());
  for (int it : {0, 1, 3, 17}) {
    const auto m = fit_lda(synth.docs, params(4, it, 3));
    const auto& totals = m.topic_totals();
    CHECK(std::accumulate(totals.begin(), totals.end(), std::int64_t{0}) == tokens);
    const auto& tw = m.topic_word_counts();
    CHECK(std::accumulate(tw.begin(), tw.end(), std::int64_t{0}) == tokens);
  }
}

TEST_CASE("vocabulary filter and lowercasing") {
  LdaParams p = params(2, 5, 1);
  p.min_doc_freq = 2;
  const auto m = fit_lda({{"Apple", "pear"}, {"apple", "fig"}}, p);
  CHECK(m.vocabulary() == Doc{"apple"});
  CHECK(m.word_id("APPLE").has_value() == false);
  CHECK(m.word_id(m.normalize("APPLE")).has_value());
}

TEST_CASE("inference edge cases give the uniform vector") {
  const auto m = fit_lda({{"a", "b"}, {"a", "c"}}, params(4, 10, 2));
  for (const auto& doc : {Doc{}, Doc{"zzz", "yyy"}}) {
    const auto theta = infer_doc_topics(m, doc, 20, 1);
    REQUIRE(theta.size() == 4);
    for (double v : theta) CHECK(v == doctest::Approx(0.25));
  }
}

TEST_CASE("top_k_normalized examples") {
  std::vector<double> uniform(30, 1.0 / 30.0);
  for (double v : top_k_normalized(uniform, 5)) CHECK(v == doctest::Approx(0.2));

  std::vector<double> onehot(30, 0.0);
  onehot[17] = 1.0;
  CHECK(top_k_normalized(onehot, 5) == std::vector<double>{1, 0, 0, 0, 0});

  std::vector<double> dist{0.05, 0.4, 0.1, 0.3, 0.05, 0.1, 0.0, 0.0};
  const std::vector<double> expected{0.4 / 0.95, 0.3 / 0.95, 0.1 / 0.95, 0.1 / 0.95, 0.05 / 0.95};
  const auto got = top_k_normalized(dist, 5);
  REQUIRE(got.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(std::round(got[0] * 1e4) / 1e4 == doctest::Approx(0.4211));
  CHECK(std::round(got[4] * 1e4) / 1e4 == doctest::Approx(0.0526));

  CHECK_THROWS_AS(top_k_normalized(dist, 0), ParameterError);
  CHECK_THROWS_AS(top_k_normalized(dist, 9), ParameterError);
}

TEST_CASE("top_k_normalized output is a descending simplex") {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k_total = 2 + rng.below(40);
    std::vector<double> dist(k_total);
    double total = 0.0;
    for (auto& v : dist) total += (v = rng.uniform() < 0.2 ? 0.0 : rng.uniform());
    if (total == 0.0) dist[0] = total = 1.0;
    for (auto& v : dist) v /= total;
    const int k = 1 + static_cast<int>(rng.below(k_total));
    const auto out = top_k_normalized(dist, k);
    REQUIRE(out.size() == static_cast<std::size_t>(k));
    CHECK(std::is_sorted(out.rbegin(), out.rend()));
    CHECK(std::all_of(out.begin(), out.end(), [](double v) { return v >= 0.0; }));
    CHECK(std::abs(row_sum(out) - 1.0) < 1e-9);
  }
}

TEST_CASE("relabeling permutes topics and doc_topic columns together") {
  const auto synth = oracle::disjoint_topic_corpus(3, 12, 20);
  const auto m = fit_lda(synth.docs, params(3, 20, 4));
  const std::vector<std::size_t> perm{2, 0, 1};
  const auto r = m.relabeled(perm);
  for (std::size_t d = 0; d < m.doc_topic().size(); ++d) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(r.doc_topic()[d][j] == m.doc_topic()[d][perm[j]]);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(r.topic_word_distribution(j) == m.topic_word_distribution(perm[j]));
  }
  const std::vector<std::size_t> inverse{1, 2, 0};
  CHECK(r.relabeled(inverse).serialize() == m.serialize());
  CHECK_THROWS_AS(m.relabeled({0, 0, 1}), ParameterError);
}

TEST_CASE("model persistence round-trips") {
  const auto synth = oracle::disjoint_topic_corpus(4, 12, 20);
  const auto m = fit_lda(synth.docs, params(3, 20, 6));
  const auto back = TopicModel::deserialize(m.serialize());
  CHECK(back.serialize() == m.serialize());
  CHECK(back.topic_word_counts() == m.topic_word_counts());
  CHECK(back.vocabulary() == m.vocabulary());
  const auto doc = synth.docs[0];
  CHECK(infer_doc_topics(back, doc, 30, 1) == infer_doc_topics(m, doc, 30, 1));
  CHECK_THROWS_AS(TopicModel::deserialize("NOT-LDA\n"), ParseError);
}
