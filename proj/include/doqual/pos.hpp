#pragma once

// Averaged-perceptron chain tagger and tag-presence features.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace doqual {

class TagSet {
 public:
  TagSet() = default;
  /// Throws SchemaError on duplicate or empty tags.
  TagSet(std::string name, std::vector<std::string> tags);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& tags() const { return tags_; }
  std::size_t size() const { return tags_.size(); }
  std::optional<std::size_t> index_of(std::string_view tag) const;
  bool contains(std::string_view tag) const { return index_of(tag).has_value(); }

  /// Penn Treebank word tags plus sentence-final and comma punctuation (38).
  static TagSet penn38();
  /// Twitter tags (24).
  static TagSet tweet24();

  friend bool operator==(const TagSet& a, const TagSet& b) {
    return a.name_ == b.name_ && a.tags_ == b.tags_;
  }

 private:
  std::string name_;
  std::vector<std::string> tags_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One tag per line; line order is vector order. Blank lines are ignored.
TagSet load_tagset(const std::filesystem::path& path);

/// Resolves "penn38" / "tweet24" to the built-in sets, anything else as a file path.
TagSet resolve_tagset(const std::string& name_or_path);

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
};

/// Reads `word_TAG word_TAG ...` lines, splitting each item on its last underscore.
std::vector<TaggedSentence> load_tagged_corpus(const std::filesystem::path& path);
std::vector<TaggedSentence> parse_tagged_corpus(std::string_view content,
                                                const std::string& source = "<memory>");

class TaggerModel {
 public:
  TaggerModel() = default;
  explicit TaggerModel(TagSet tagset) : tagset_(std::move(tagset)) {}

  const TagSet& tagset() const { return tagset_; }
  bool averaged() const { return averaged_; }
  bool trained() const { return !weights_.empty(); }
  std::size_t feature_count() const { return weights_.size(); }

  /// Greedy left-to-right decoding. Ties go to the earlier tag in the tagset.
  std::vector<std::string> tag(const std::vector<std::string>& tokens) const;

  void save(const std::filesystem::path& path) const;
  static TaggerModel load(const std::filesystem::path& path);
  std::string serialize() const;
  static TaggerModel deserialize(std::string_view content);

  friend TaggerModel train_tagger(const std::vector<TaggedSentence>& corpus, const TagSet& tagset,
                                  int epochs, std::uint64_t seed);

 private:
  std::size_t predict(const std::vector<std::string>& features) const;

  TagSet tagset_;
  std::unordered_map<std::string, std::vector<double>> weights_;
  bool averaged_ = false;
};

/// Trains with per-epoch shuffling seeded by `seed` and returns averaged
/// weights. Throws SchemaError for an empty corpus or an out-of-tagset gold tag.
TaggerModel train_tagger(const std::vector<TaggedSentence>& corpus, const TagSet& tagset,
                         int epochs, std::uint64_t seed);

/// Element i is 1 when tagset.tags()[i] occurs in `tags`.
std::vector<std::uint8_t> pos_presence_vector(const std::vector<std::string>& tags,
                                              const TagSet& tagset);

}  // namespace doqual
