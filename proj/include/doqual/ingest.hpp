#pragma once

// Corpus data model, JSON-lines loading, label derivation and balancing.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "doqual/document_kind.hpp"

namespace doqual {

/// Binary quality label. Tweets: class1 (no retweets) / class2 (retweeted).
/// Articles: A (not well cited) / Y (well cited).
enum class Label { negative = 0, positive = 1 };

std::string_view label_name(DocumentKind kind, Label label);
/// Accepts the kind's own names ("class1"/"class2" or "A"/"Y").
Label parse_label(DocumentKind kind, std::string_view name);

using MetaValue = std::variant<double, std::string>;

struct Document {
  std::string id;
  std::string text;
  DocumentKind kind = DocumentKind::tweet;
  std::map<std::string, MetaValue> meta;
  std::optional<double> label_raw;
  std::optional<Label> label;
  /// Pre-assigned part-of-speech tags; when present the tagger is bypassed.
  std::optional<std::vector<std::string>> tags;
};

struct Dataset {
  DocumentKind kind = DocumentKind::tweet;
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  /// Counts of labeled documents, indexed by Label.
  std::array<std::size_t, 2> label_counts() const;
  bool fully_labeled() const;
};

/// One JSON object per line with keys id, text, meta, label_raw (plus the
/// optional label and tags written by this library). Blank lines are skipped.
Dataset parse_corpus(std::string_view content, DocumentKind kind, const std::string& source = "<memory>");
Dataset load_corpus(const std::filesystem::path& path, DocumentKind kind);

std::string serialize_corpus(const Dataset& dataset);
void write_corpus(const Dataset& dataset, const std::filesystem::path& path);

/// Label rule for a corpus kind. Articles need an explicit PageRank threshold.
struct LabelRule {
  DocumentKind kind = DocumentKind::tweet;
  std::optional<double> threshold;
};

/// Tweets: label_raw >= 1 is class2. Articles: threshold_label on label_raw.
Dataset derive_labels(const Dataset& dataset, const LabelRule& rule);

/// Default majority fraction after balancing: 0.546 for tweets, 0.6408 for articles.
double default_majority_fraction(DocumentKind kind);

/// Downsamples the majority class at random until its share is at most
/// `target_majority_fraction`. Document order is preserved.
Dataset balance(const Dataset& dataset, double target_majority_fraction, std::uint64_t seed);

/// 64-bit FNV-1a, used for corpus checksums in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace doqual
