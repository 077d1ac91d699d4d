#include "doqual/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "doqual/diagnostics.hpp"
#include "doqual/error.hpp"
#include "doqual/graph.hpp"
#include "doqual/random.hpp"

namespace doqual {

using nlohmann::json;

std::string_view label_name(DocumentKind kind, Label label) {
  if (kind == DocumentKind::tweet) return label == Label::positive ? "class2" : "class1";
  return label == Label::positive ? "Y" : "A";
}

Label parse_label(DocumentKind kind, std::string_view name) {
  if (name == label_name(kind, Label::negative)) return Label::negative;
  if (name == label_name(kind, Label::positive)) return Label::positive;
  throw SchemaError("label '" + std::string(name) + "' is not valid for " + std::string(to_string(kind)) + " corpora");
}

std::array<std::size_t, 2> Dataset::label_counts() const {
  std::array<std::size_t, 2> counts{0, 0};
  for (const auto& d : documents) {
    if (d.label) ++counts[static_cast<std::size_t>(*d.label)];
  }
  return counts;
}

bool Dataset::fully_labeled() const {
  return std::all_of(documents.begin(), documents.end(), [](const Document& d) { return d.label.has_value(); });
}

Dataset parse_corpus(std::string_view content, DocumentKind kind, const std::string& source) {
  Dataset dataset;
  dataset.kind = kind;
  std::unordered_set<std::string> ids;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, ln, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(source, ln, "expected a JSON object");

    auto schema = [&](const std::string& what) { return SchemaError(source + ":" + std::to_string(ln) + ": " + what); };
    Document doc;
    doc.kind = kind;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const auto& key = it.key();
      const auto& value = it.value();
      if (key == "id") {
        if (!value.is_string()) throw schema("'id' must be a string");
        doc.id = value.get<std::string>();
      } else if (key == "text") {
        if (!value.is_string()) throw schema("'text' must be a string");
        doc.text = value.get<std::string>();
      } else if (key == "meta") {
        if (!value.is_object()) throw schema("'meta' must be an object");
        for (auto m = value.begin(); m != value.end(); ++m) {
          if (m.value().is_number()) {
            doc.meta.emplace(m.key(), m.value().get<double>());
          } else if (m.value().is_string()) {
            doc.meta.emplace(m.key(), m.value().get<std::string>());
          } else {
            throw schema("meta field '" + m.key() + "' must be a number or string");
          }
        }
      } else if (key == "label_raw") {
        if (value.is_null()) continue;
        if (!value.is_number()) throw schema("'label_raw' must be a number");
        doc.label_raw = value.get<double>();
      } else if (key == "label") {
        if (value.is_null()) continue;
        if (!value.is_string()) throw schema("'label' must be a string");
        doc.label = parse_label(kind, value.get<std::string>());
      } else if (key == "tags") {
        if (!value.is_array()) throw schema("'tags' must be an array of strings");
        std::vector<std::string> tags;
        for (const auto& t : value) {
          if (!t.is_string()) throw schema("'tags' must be an array of strings");
          tags.push_back(t.get<std::string>());
        }
        doc.tags = std::move(tags);
      } else {
        warn(source + ":" + std::to_string(ln) + ": ignoring unknown key '" + key + "'");
      }
    }
    if (!obj.contains("id")) throw schema("missing 'id'");
    if (!obj.contains("text")) throw schema("missing 'text'");
    if (!ids.insert(doc.id).second) throw schema("duplicate document id '" + doc.id + "'");
    dataset.documents.push_back(std::move(doc));
  }
  return dataset;
}

Dataset load_corpus(const std::filesystem::path& path, DocumentKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str(), kind, path.string());
}

std::string serialize_corpus(const Dataset& dataset) {
  std::string out;
  for (const auto& d : dataset.documents) {
    json obj;
    obj["id"] = d.id;
    obj["text"] = d.text;
    json meta = json::object();
    for (const auto& [k, v] : d.meta) {
      std::visit([&](const auto& x) { meta[k] = x; }, v);
    }
    obj["meta"] = std::move(meta);
    if (d.label_raw) obj["label_raw"] = *d.label_raw;
    if (d.label) obj["label"] = std::string(label_name(dataset.kind, *d.label));
    if (d.tags) obj["tags"] = *d.tags;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void write_corpus(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_corpus(dataset);
}

Dataset derive_labels(const Dataset& dataset, const LabelRule& rule) {
  if (rule.kind == DocumentKind::article && !rule.threshold) {
    throw ParameterError("article labels need an explicit PageRank threshold");
  }
  Dataset out = dataset;
  for (auto& d : out.documents) {
    if (!d.label_raw) throw SchemaError("document '" + d.id + "' has no label_raw");
    if (rule.kind == DocumentKind::tweet) {
      d.label = *d.label_raw >= 1.0 ? Label::positive : Label::negative;
    } else {
      d.label = threshold_label(*d.label_raw, *rule.threshold) == CitationClass::Y ? Label::positive
                                                                                   : Label::negative;
    }
  }
  return out;
}

double default_majority_fraction(DocumentKind kind) {
  return kind == DocumentKind::tweet ? 0.546 : 0.6408;
}

Dataset balance(const Dataset& dataset, double target, std::uint64_t seed) {
  if (!(target >= 0.5 && target < 1.0)) throw ParameterError("target majority fraction must lie in [0.5, 1)");
  if (!dataset.fully_labeled()) throw BalanceError("balancing needs every document labeled");
  const auto counts = dataset.label_counts();
  if (counts[0] == 0 || counts[1] == 0) throw BalanceError("balancing needs both classes present");

  const auto majority = counts[1] > counts[0] ? Label::positive : Label::negative;
  const std::size_t n_major = std::max(counts[0], counts[1]);
  const std::size_t n_minor = std::min(counts[0], counts[1]);
  // Largest m with m / (m + minority) <= target.
  auto keep = static_cast<std::size_t>(std::floor(target * static_cast<double>(n_minor) / (1.0 - target) + 1e-9));
  while (keep > 0 && static_cast<double>(keep) > target * static_cast<double>(keep + n_minor) + 1e-12) --keep;
  if (n_major <= keep) return dataset;

  std::vector<std::size_t> major_idx;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.documents[i].label == majority) major_idx.push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(major_idx);
  std::vector<bool> drop(dataset.size(), false);
  for (std::size_t j = keep; j < major_idx.size(); ++j) drop[major_idx[j]] = true;

  Dataset out;
  out.kind = dataset.kind;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!drop[i]) out.documents.push_back(dataset.documents[i]);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace doqual
