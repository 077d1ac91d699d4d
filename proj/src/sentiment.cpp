#include "doqual/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doqual/diagnostics.hpp"
#include "doqual/error.hpp"
#include "doqual/textseg.hpp"

namespace doqual {
namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<double> SentimentLexicon::lookup(std::string_view word) const {
  auto it = entries_.find(lower_ascii(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool SentimentLexicon::set(std::string_view word, double value) {
  if (!std::isfinite(value) || value < lower_bound() || value > 1.0) {
    throw SchemaError("lexicon value " + std::to_string(value) + " for '" + std::string(word) +
                      "' outside the declared range");
  }
  auto [it, inserted] = entries_.insert_or_assign(lower_ascii(word), value);
  return inserted;
}

SentimentLexicon parse_lexicon(std::string_view content, const std::string& source) {
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t ln = 0;
  std::optional<SentimentLexicon> lexicon;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!lexicon) {
      const auto header = trim_ascii(line);
      if (header == "#range=prob") {
        lexicon.emplace(LexiconRange::probability);
      } else if (header == "#range=polarity") {
        lexicon.emplace(LexiconRange::polarity);
      } else {
        throw ParseError(source, ln, "expected header '#range=prob' or '#range=polarity'");
      }
      continue;
    }
    if (trim_ascii(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError(source, ln, "expected word<TAB>value");
    const std::string word = line.substr(0, tab);
    const auto value_text = std::string(trim_ascii(std::string_view(line).substr(tab + 1)));
    double value;
    std::size_t used = 0;
    try {
      value = std::stod(value_text, &used);
    } catch (const std::exception&) {
      throw ParseError(source, ln, "bad value '" + value_text + "'");
    }
    if (used != value_text.size()) throw ParseError(source, ln, "bad value '" + value_text + "'");
    try {
      if (!lexicon->set(word, value)) {
        warn(source + ":" + std::to_string(ln) + ": duplicate lexicon word '" + word + "', keeping the last value");
      }
    } catch (const SchemaError& e) {
      throw SchemaError(source + ":" + std::to_string(ln) + ": " + e.what());
    }
  }
  if (!lexicon) throw ParseError(source, 1, "missing range header");
  return std::move(*lexicon);
}

SentimentLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str(), path.string());
}

double tweet_sentiment(const std::vector<std::string>& tokens, const SentimentLexicon& lexicon) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    if (auto v = lexicon.lookup(t)) {
      sum += *v;
      ++hits;
    }
  }
  return hits == 0 ? lexicon.neutral() : sum / static_cast<double>(hits);
}

ArticleSentiment article_sentiment(const std::vector<std::string>& sentences, const SentimentLexicon& lexicon) {
  if (sentences.empty()) throw UndefinedInputError("article sentiment needs at least one sentence");
  ArticleSentiment out;
  double sum = 0.0;
  bool first = true;
  for (const auto& s : sentences) {
    const double score = tweet_sentiment(tokenize(s), lexicon);
    sum += score;
    out.maximum = first ? score : std::max(out.maximum, score);
    first = false;
  }
  // A mean of equal values can round one ulp above them.
  out.average = std::min(sum / static_cast<double>(sentences.size()), out.maximum);
  return out;
}

}  // namespace doqual
