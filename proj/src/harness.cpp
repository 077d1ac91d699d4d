#include "doqual/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "doqual/diagnostics.hpp"
#include "doqual/error.hpp"
#include "doqual/random.hpp"

namespace doqual {

using nlohmann::json;

namespace {

// Per-document rows for one feature group, or the reason it is unavailable.
struct GroupBlock {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> names;
  std::optional<std::string> error;
};

std::vector<std::string> document_tokens(const Document& doc, const SegmentOptions& segment) {
  return tokenize(segment.strip_urls ? strip_urls(doc.text) : doc.text);
}

std::string_view scope_name(TopicScope s) { return s == TopicScope::global ? "global" : "per_fold"; }

}  // namespace

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int k, std::uint64_t seed,
                                                       bool stratify) {
  if (k < 2) throw FoldError("fold count must be at least 2");
  const auto kk = static_cast<std::size_t>(k);
  std::vector<std::vector<std::size_t>> folds(kk);
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> groups;
  if (stratify) {
    groups.resize(2);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != 0 && labels[i] != 1) throw FoldError("labels must be 0 or 1");
      groups[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    for (std::size_t c = 0; c < 2; ++c) {
      if (groups[c].size() < kk) {
        throw FoldError("class " + std::to_string(c) + " has " + std::to_string(groups[c].size()) +
                        " members, fewer than " + std::to_string(k) + " folds");
      }
    }
  } else {
    groups.emplace_back(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) groups[0][i] = i;
    if (labels.size() < kk) throw FoldError("dataset has fewer items than folds");
  }
  // Deal each shuffled class round-robin, continuing where the previous class
  // stopped so fold sizes also stay within one of each other.
  std::size_t next = 0;
  for (auto& g : groups) {
    rng.shuffle(g);
    for (auto idx : g) {
      folds[next].push_back(idx);
      next = (next + 1) % kk;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

Confusion& Confusion::operator+=(const Confusion& other) {
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t p = 0; p < 2; ++p) counts[t][p] += other.counts[t][p];
  }
  return *this;
}

Metrics compute_metrics(const Confusion& c) {
  Metrics m;
  const double total = static_cast<double>(c.total());
  if (total == 0.0) return m;
  m.accuracy = static_cast<double>(c.counts[0][0] + c.counts[1][1]) / total;
  for (std::size_t k = 0; k < 2; ++k) {
    const double tp = static_cast<double>(c.counts[k][k]);
    const double predicted = static_cast<double>(c.counts[0][k] + c.counts[1][k]);
    const double actual = static_cast<double>(c.counts[k][0] + c.counts[k][1]);
    m.precision[k] = predicted > 0.0 ? tp / predicted : 0.0;
    m.recall[k] = actual > 0.0 ? tp / actual : 0.0;
    const double denom = m.precision[k] + m.recall[k];
    m.f1[k] = denom > 0.0 ? 2.0 * m.precision[k] * m.recall[k] / denom : 0.0;
    const double weight = actual / total;
    m.weighted_precision += weight * m.precision[k];
    m.weighted_recall += weight * m.recall[k];
    m.weighted_f1 += weight * m.f1[k];
  }
  return m;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The small offset absorbs binary representation error such as 54.6 * 100 = 5459.999...
  return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", round_half_up(100.0 * fraction, 2));
  return buf;
}

SuiteReport evaluate_suite(const Dataset& dataset, const std::vector<int>& config_ids, const EvalParams& params,
                           const SuiteResources& resources) {
  if (!dataset.fully_labeled()) throw SchemaError("evaluation needs every document labeled");
  const std::size_t n = dataset.size();
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(*dataset.documents[i].label);
  const auto folds = stratified_folds(labels, params.folds, params.seed, params.stratify);

  std::vector<int> ids = config_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  SuiteReport report;
  report.venues = VenueCodes::from_dataset(dataset);

  FeatureResources fr;
  fr.tagger = resources.tagger;
  fr.tagset = resources.tagset;
  fr.lexicon = resources.lexicon;
  fr.network = resources.network;
  fr.venues = &report.venues;
  fr.venue_encoding = params.venue_encoding;
  fr.top_k = params.top_k;
  fr.infer_iterations = params.infer_iterations;
  fr.segment = params.segment;
  fr.imputation = &report.imputation;

  std::vector<bool> needed(7, false);
  for (int id : ids) {
    for (auto g : model_config(id).groups) needed[static_cast<std::size_t>(g)] = true;
  }

  // Fold-independent groups.
  std::map<FeatureGroup, GroupBlock> blocks;
  for (auto g : {FeatureGroup::meta, FeatureGroup::pos, FeatureGroup::length, FeatureGroup::readability,
                 FeatureGroup::sentiment}) {
    if (!needed[static_cast<std::size_t>(g)]) continue;
    GroupBlock block;
    block.rows.resize(n);
    std::vector<bool> missing(n, false);
    try {
      for (std::size_t i = 0; i < n; ++i) {
        try {
          auto fv = group_features(dataset.documents[i], g, fr);
          if (block.names.empty()) block.names = std::move(fv.names);
          block.rows[i] = std::move(fv.values);
        } catch (const UndefinedInputError&) {
          if (g != FeatureGroup::readability) throw;
          missing[i] = true;
        }
      }
    } catch (const Error& e) {
      block.error = e.what();
    }
    if (!block.error && g == FeatureGroup::readability) {
      // Documents without words take the corpus mean of each index.
      const std::size_t dim = group_dimension(g, dataset.kind, fr, params.topics);
      std::vector<double> mean(dim, 0.0);
      std::size_t present = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (missing[i]) continue;
        ++present;
        for (std::size_t j = 0; j < dim; ++j) mean[j] += block.rows[i][j];
      }
      if (present > 0) {
        for (auto& m : mean) m /= static_cast<double>(present);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!missing[i]) continue;
        block.rows[i] = mean;
        ++report.readability_imputed;
      }
      if (block.names.empty()) {
        block.names = dataset.kind == DocumentKind::tweet
                          ? std::vector<std::string>{"readability:cli"}
                          : std::vector<std::string>{"readability:cli", "readability:ari", "readability:gfi"};
      }
    }
    blocks.emplace(g, std::move(block));
  }
  for (const auto& [field, count] : report.imputation) {
    warn("meta field '" + field + "' missing for " + std::to_string(count) + " documents, imputed as 0");
  }

  // Topic distributions: topic_dists[f][i] for fold f (a single shared entry
  // when fitting is global or the model is supplied).
  const bool need_topics =
      needed[static_cast<std::size_t>(FeatureGroup::topics5)] || needed[static_cast<std::size_t>(FeatureGroup::topics30)];
  std::vector<std::vector<std::vector<double>>> topic_dists;
  std::optional<std::string> topic_error;
  if (need_topics) {
    try {
      std::vector<std::vector<std::string>> tokens(n);
      for (std::size_t i = 0; i < n; ++i) tokens[i] = document_tokens(dataset.documents[i], params.segment);
      LdaParams lda;
      lda.topics = params.topics;
      lda.alpha = params.lda_alpha;
      lda.beta = params.lda_beta;
      lda.iterations = params.lda_iterations;
      lda.min_doc_freq = params.min_doc_freq;
      if (resources.topics) {
        if (resources.topics->topics() != params.topics) {
          throw ConfigurationError("supplied topic model has " + std::to_string(resources.topics->topics()) +
                                   " topics, run expects " + std::to_string(params.topics));
        }
        auto& shared = topic_dists.emplace_back(n);
        for (std::size_t i = 0; i < n; ++i) {
          shared[i] = infer_doc_topics(*resources.topics, tokens[i], params.infer_iterations,
                                       derive_seed(params.seed, 0x70000 + i));
        }
      } else if (params.topic_scope == TopicScope::global) {
        lda.seed = derive_seed(params.seed, 0x60000);
        auto model = fit_lda(tokens, lda);
        topic_dists.push_back(model.doc_topic());
      } else {
        for (std::size_t f = 0; f < folds.size(); ++f) {
          std::vector<bool> is_test(n, false);
          for (auto i : folds[f]) is_test[i] = true;
          std::vector<std::vector<std::string>> train_tokens;
          std::vector<std::size_t> train_idx;
          for (std::size_t i = 0; i < n; ++i) {
            if (is_test[i]) continue;
            train_idx.push_back(i);
            train_tokens.push_back(tokens[i]);
          }
          const auto fold_seed = derive_seed(params.seed, 0x50000 + f);
          lda.seed = fold_seed;
          auto model = fit_lda(train_tokens, lda);
          auto& dists = topic_dists.emplace_back(n);
          for (std::size_t j = 0; j < train_idx.size(); ++j) dists[train_idx[j]] = model.doc_topic()[j];
          for (auto i : folds[f]) {
            dists[i] = infer_doc_topics(model, tokens[i], params.infer_iterations, derive_seed(fold_seed, i));
          }
        }
      }
    } catch (const Error& e) {
      topic_error = std::string("topic model: ") + e.what();
    }
  }

  auto topic_block_for = [&](FeatureGroup g, std::size_t fold) {
    GroupBlock block;
    const auto& dists = topic_dists.size() == 1 ? topic_dists[0] : topic_dists[fold];
    block.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto fv = group_features(dataset.documents[i], g, fr, std::span<const double>(dists[i]));
      if (block.names.empty()) block.names = std::move(fv.names);
      block.rows[i] = std::move(fv.values);
    }
    return block;
  };

  // Topic blocks per fold, shared across configs.
  std::map<FeatureGroup, std::vector<GroupBlock>> topic_blocks;
  if (need_topics && !topic_error) {
    for (auto g : {FeatureGroup::topics5, FeatureGroup::topics30}) {
      if (!needed[static_cast<std::size_t>(g)]) continue;
      auto& per_fold = topic_blocks[g];
      try {
        if (topic_dists.size() == 1) {
          per_fold.push_back(topic_block_for(g, 0));
        } else {
          for (std::size_t f = 0; f < folds.size(); ++f) per_fold.push_back(topic_block_for(g, f));
        }
      } catch (const Error& e) {
        topic_error = std::string("topic features: ") + e.what();
      }
    }
  }

  for (int id : ids) {
    const auto& config = model_config(id);
    EvalRow row;
    row.config_id = id;
    row.description = config.description;
    try {
      for (auto g : config.groups) {
        if (g == FeatureGroup::topics5 || g == FeatureGroup::topics30) {
          if (topic_error) throw ConfigurationError(*topic_error);
        } else if (const auto& b = blocks.at(g); b.error) {
          throw ConfigurationError(std::string(to_string(g)) + ": " + *b.error);
        }
      }

      auto block = [&](FeatureGroup g, std::size_t fold) -> const GroupBlock& {
        if (g == FeatureGroup::topics5 || g == FeatureGroup::topics30) {
          const auto& per_fold = topic_blocks.at(g);
          return per_fold.size() == 1 ? per_fold[0] : per_fold[fold];
        }
        return blocks.at(g);
      };

      std::vector<std::string> names;
      for (auto g : config.groups) {
        const auto& b = block(g, 0);
        names.insert(names.end(), b.names.begin(), b.names.end());
      }
      const auto dim = static_cast<Eigen::Index>(names.size());
      row.dimension = names.size();

      for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<bool> is_test(n, false);
        for (auto i : folds[f]) is_test[i] = true;
        const auto n_test = static_cast<Eigen::Index>(folds[f].size());
        const auto n_train = static_cast<Eigen::Index>(n) - n_test;
        Eigen::MatrixXd X_train(n_train, dim), X_test(n_test, dim);
        std::vector<int> y_train, y_test;
        y_train.reserve(static_cast<std::size_t>(n_train));
        y_test.reserve(static_cast<std::size_t>(n_test));
        Eigen::Index r_train = 0, r_test = 0;
        for (std::size_t i = 0; i < n; ++i) {
          Eigen::MatrixXd& X = is_test[i] ? X_test : X_train;
          const Eigen::Index r = is_test[i] ? r_test++ : r_train++;
          Eigen::Index col = 0;
          for (auto g : config.groups) {
            for (double v : block(g, f).rows[i]) X(r, col++) = v;
          }
          (is_test[i] ? y_test : y_train).push_back(labels[i]);
        }
        const auto model = train_logistic(X_train, y_train, params.logistic, names);
        Confusion c;
        for (Eigen::Index r = 0; r < n_test; ++r) {
          const Eigen::VectorXd x = X_test.row(r).transpose();
          c.add(y_test[static_cast<std::size_t>(r)], model.classify(std::span<const double>(x.data(), x.size())));
        }
        row.pooled += c;
        row.folds.push_back(c);
      }
      row.metrics = compute_metrics(row.pooled);
      if (row.pooled.total() != n) throw Error("pooled confusion does not cover the dataset");
      if (std::abs(row.metrics.weighted_recall - row.metrics.accuracy) > 1e-9) {
        throw Error("weighted recall differs from accuracy");
      }
    } catch (const Error& e) {
      row.failure = e.what();
      row.folds.clear();
      row.pooled = {};
      row.metrics = {};
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

EvalRow evaluate(const Dataset& dataset, const ModelConfig& config, const EvalParams& params,
                 const SuiteResources& resources) {
  auto report = evaluate_suite(dataset, {config.id}, params, resources);
  auto row = std::move(report.rows.front());
  if (row.failure) throw Error("config " + std::to_string(config.id) + " failed: " + *row.failure);
  return row;
}

std::string format_report_tsv(const SuiteReport& report) {
  std::string out = "config\taccuracy\tf1_class1\tf1_class2\tf1\tprecision\trecall\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.config_id);
    if (row.failure) {
      out += "\tFAILED\tNA\tNA\tNA\tNA\tNA\n";
      continue;
    }
    const auto& m = row.metrics;
    for (double v : {m.accuracy, m.f1[0], m.f1[1], m.weighted_f1, m.weighted_precision, m.weighted_recall}) {
      out += '\t';
      out += format_percent(v);
    }
    out += '\n';
  }
  return out;
}

std::string format_report_table(const SuiteReport& report, DocumentKind kind) {
  const std::string neg(label_name(kind, Label::negative));
  const std::string pos(label_name(kind, Label::positive));
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"No.", "Features", "Accuracy", "F1 " + neg, "F1 " + pos, "F1", "Precision", "Recall"});
  for (const auto& row : report.rows) {
    std::vector<std::string> r{std::to_string(row.config_id), row.description};
    if (row.failure) {
      r.push_back("FAILED: " + *row.failure);
    } else {
      const auto& m = row.metrics;
      for (double v : {m.accuracy, m.f1[0], m.f1[1], m.weighted_f1, m.weighted_precision, m.weighted_recall}) {
        r.push_back(format_percent(v));
      }
    }
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(8, 0);
  for (const auto& r : cells) {
    // A failure message spans the metric columns and does not set their width.
    const std::size_t limit = r.size() == 3 ? 2 : r.size();
    for (std::size_t j = 0; j < limit; ++j) width[j] = std::max(width[j], r[j].size());
  }
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& r = cells[i];
    std::string line;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) line += "  ";
      std::string cell = r[j];
      if (j + 1 < r.size()) {
        // Numbers right-aligned, text left-aligned.
        const bool numeric = j != 1;
        const std::size_t pad = width[j] > cell.size() ? width[j] - cell.size() : 0;
        cell = numeric ? std::string(pad, ' ') + cell : cell + std::string(pad, ' ');
      } else if (r.size() == 8) {
        cell = std::string(width[j] > cell.size() ? width[j] - cell.size() : 0, ' ') + cell;
      }
      line += cell;
    }
    out += line + '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    }
  }
  return out;
}

std::string manifest_json(const Dataset& dataset, const std::vector<int>& config_ids, const EvalParams& p,
                          const SuiteReport& report, const std::map<std::string, std::string>& extra) {
  json params = {
      {"folds", p.folds},
      {"stratify", p.stratify},
      {"seed", p.seed},
      {"ridge", p.logistic.ridge},
      {"tol", p.logistic.tol},
      {"max_iter", p.logistic.max_iter},
      {"standardize", p.logistic.standardize},
      {"topics", p.topics},
      {"top_k", p.top_k},
      {"lda_alpha", p.lda_alpha ? json(*p.lda_alpha) : json(nullptr)},
      {"lda_alpha_resolved", p.lda_alpha.value_or(50.0 / p.topics)},
      {"lda_beta", p.lda_beta},
      {"lda_iterations", p.lda_iterations},
      {"infer_iterations", p.infer_iterations},
      {"min_doc_freq", p.min_doc_freq},
      {"topic_scope", std::string(scope_name(p.topic_scope))},
      {"venue_encoding", p.venue_encoding == VenueEncoding::onehot ? "onehot" : "index"},
      {"strip_urls", p.segment.strip_urls},
      {"abbreviations", p.segment.abbreviations},
  };
  char checksum[17];
  std::snprintf(checksum, sizeof checksum, "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize_corpus(dataset))));
  const auto counts = dataset.label_counts();
  json failures = json::object();
  for (const auto& row : report.rows) {
    if (row.failure) failures[std::to_string(row.config_id)] = *row.failure;
  }
  json m = {
      {"format", "doqual-manifest-1"},
      {"kind", std::string(to_string(dataset.kind))},
      {"documents", dataset.size()},
      {"label_counts",
       {{std::string(label_name(dataset.kind, Label::negative)), counts[0]},
        {std::string(label_name(dataset.kind, Label::positive)), counts[1]}}},
      {"corpus_checksum_fnv1a64", checksum},
      {"configs", config_ids},
      {"params", params},
      {"venues", report.venues.venues()},
      {"meta_imputed", report.imputation},
      {"readability_imputed", report.readability_imputed},
      {"failures", failures},
  };
  for (const auto& [k, v] : extra) m["inputs"][k] = v;
  return m.dump(2) + "\n";
}

EvalParams eval_params_from_manifest(const std::string& json_text) {
  json m;
  try {
    m = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError("<manifest>", 1, e.what());
  }
  if (!m.contains("params") || !m["params"].is_object()) throw SchemaError("manifest has no params block");
  const auto& p = m["params"];
  EvalParams out;
  try {
    out.folds = p.value("folds", out.folds);
    out.stratify = p.value("stratify", out.stratify);
    out.seed = p.value("seed", out.seed);
    out.logistic.ridge = p.value("ridge", out.logistic.ridge);
    out.logistic.tol = p.value("tol", out.logistic.tol);
    out.logistic.max_iter = p.value("max_iter", out.logistic.max_iter);
    out.logistic.standardize = p.value("standardize", out.logistic.standardize);
    out.topics = p.value("topics", out.topics);
    out.top_k = p.value("top_k", out.top_k);
    if (p.contains("lda_alpha") && !p["lda_alpha"].is_null()) out.lda_alpha = p["lda_alpha"].get<double>();
    out.lda_beta = p.value("lda_beta", out.lda_beta);
    out.lda_iterations = p.value("lda_iterations", out.lda_iterations);
    out.infer_iterations = p.value("infer_iterations", out.infer_iterations);
    out.min_doc_freq = p.value("min_doc_freq", out.min_doc_freq);
    out.topic_scope = p.value("topic_scope", std::string("per_fold")) == "global" ? TopicScope::global
                                                                                  : TopicScope::per_fold;
    out.venue_encoding =
        p.value("venue_encoding", std::string("index")) == "onehot" ? VenueEncoding::onehot : VenueEncoding::index;
    out.segment.strip_urls = p.value("strip_urls", false);
    if (p.contains("abbreviations")) out.segment.abbreviations = p["abbreviations"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("manifest params: ") + e.what());
  }
  return out;
}

SuiteReport run_suite(const Dataset& dataset, const std::vector<int>& config_ids, const EvalParams& params,
                      const SuiteResources& resources, const std::filesystem::path& out_dir,
                      const std::map<std::string, std::string>& extra) {
  auto report = evaluate_suite(dataset, config_ids, params, resources);
  std::filesystem::create_directories(out_dir);
  auto write = [&](const char* name, const std::string& content) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (out_dir / name).string());
    out << content;
  };
  std::vector<int> ids = config_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  write("report.tsv", format_report_tsv(report));
  write("report.txt", format_report_table(report, dataset.kind));
  write("manifest.json", manifest_json(dataset, ids, params, report, extra));
  return report;
}

}  // namespace doqual
