#include <doctest.h>

#include "doqual/error.hpp"
#include "doqual/readability.hpp"

using namespace doqual;

namespace {

TextStats counts(std::size_t words, std::size_t letters, std::size_t chars, std::size_t sentences,
                 std::size_t complex = 0) {
  TextStats s;
  s.word_count = words;
  s.letter_count = letters;
  s.character_count = chars;
  s.sentence_count = sentences;
  s.complex_word_count = complex;
  s.per_word_syllables.assign(words, 1);
  return s;
}

}  // namespace

TEST_CASE("coleman_liau examples") {
  CHECK(coleman_liau(counts(100, 500, 500, 5)) == doctest::Approx(12.02).epsilon(1e-12));
  CHECK(coleman_liau(counts(100, 400, 400, 10)) == doctest::Approx(4.66).epsilon(1e-12));
  CHECK(coleman_liau(counts(1, 1, 1, 1)) == doctest::Approx(-39.62).epsilon(1e-12));
  CHECK_THROWS_AS(coleman_liau(counts(0, 0, 0, 0)), UndefinedInputError);
}

TEST_CASE("ari examples") {
  CHECK(ari(counts(100, 500, 500, 5)) == doctest::Approx(12.12).epsilon(1e-12));
  CHECK(ari(counts(1, 1, 1, 1)) == doctest::Approx(-16.22).epsilon(1e-12));
  CHECK(ari(counts(100, 400, 400, 10)) == doctest::Approx(2.41).epsilon(1e-12));
  CHECK_THROWS_AS(ari(counts(0, 0, 0, 1)), UndefinedInputError);
  CHECK_THROWS_AS(ari(counts(3, 3, 3, 0)), UndefinedInputError);
}

TEST_CASE("ari reads characters, not letters") {
  // 4.71 * 600/100 + 0.5 * 20 - 21.43
  CHECK(ari(counts(100, 500, 600, 5)) == doctest::Approx(16.83).epsilon(1e-12));
}

TEST_CASE("gunning_fog examples") {
  CHECK(gunning_fog(counts(100, 500, 500, 5, 10)) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(gunning_fog(counts(100, 500, 500, 10, 0)) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(gunning_fog(counts(5, 30, 30, 1, 5)) == doctest::Approx(42.0).epsilon(1e-12));
  CHECK_THROWS_AS(gunning_fog(counts(5, 30, 30, 0, 5)), UndefinedInputError);
}

TEST_CASE("readability_features by domain") {
  const auto s = counts(100, 500, 500, 5, 10);
  const auto tweet = readability_features(s, DocumentKind::tweet);
  REQUIRE(tweet.size() == 1);
  CHECK(tweet[0] == doctest::Approx(12.02));
  const auto article = readability_features(s, DocumentKind::article);
  REQUIRE(article.size() == 3);
  CHECK(article[0] == doctest::Approx(12.02));
  CHECK(article[1] == doctest::Approx(12.12));
  CHECK(article[2] == doctest::Approx(12.0));
  CHECK_THROWS_AS(readability_features(text_stats(""), DocumentKind::tweet), UndefinedInputError);
}

TEST_CASE("length_features") {
  CHECK(length_features(text_stats(""), DocumentKind::tweet) == std::vector<double>{0});
  CHECK(length_features(counts(40, 180, 200, 3), DocumentKind::article) == std::vector<double>{3, 40, 200});
  CHECK(length_features(text_stats("just one thing"), DocumentKind::tweet) == std::vector<double>{3});
}

TEST_CASE("monotonicity and ratio invariance") {
  const auto base = counts(50, 230, 260, 4, 6);
  auto more_letters = base;
  more_letters.letter_count += 10;
  more_letters.character_count += 10;
  CHECK(coleman_liau(more_letters) > coleman_liau(base));

  auto more_chars = base;
  more_chars.character_count += 10;
  CHECK(ari(more_chars) > ari(base));
  auto longer_sentences = base;
  longer_sentences.sentence_count -= 1;
  CHECK(ari(longer_sentences) > ari(base));

  auto more_complex = base;
  more_complex.complex_word_count += 1;
  CHECK(gunning_fog(more_complex) > gunning_fog(base));

  const auto doubled = counts(100, 460, 520, 8, 12);
  CHECK(coleman_liau(doubled) == doctest::Approx(coleman_liau(base)).epsilon(1e-12));
  CHECK(ari(doubled) == doctest::Approx(ari(base)).epsilon(1e-12));
  CHECK(gunning_fog(doubled) == doctest::Approx(gunning_fog(base)).epsilon(1e-12));
}
