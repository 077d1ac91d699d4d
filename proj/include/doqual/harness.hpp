#pragma once

// Cross-validated evaluation of the ablation configurations and report output.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doqual/features.hpp"
#include "doqual/ingest.hpp"
#include "doqual/model.hpp"

namespace doqual {

/// k disjoint, sorted index sets covering [0, labels.size()). With
/// `stratify`, each fold's class counts are within one of the proportional
/// share. Throws FoldError when a class (or, unstratified, the dataset) has
/// fewer than k members.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int k, std::uint64_t seed,
                                                       bool stratify = true);

struct Confusion {
  /// counts[truth][prediction]; index 1 is the positive class.
  std::array<std::array<std::size_t, 2>, 2> counts{};

  void add(int truth, int prediction) { ++counts[truth][prediction]; }
  std::size_t total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
  Confusion& operator+=(const Confusion& other);
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Fractions in [0, 1]. Precision and F1 of a never-predicted class are 0.
/// Weighted averages use true-class support.
struct Metrics {
  double accuracy = 0.0;
  std::array<double, 2> precision{};
  std::array<double, 2> recall{};
  std::array<double, 2> f1{};
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
};

Metrics compute_metrics(const Confusion& confusion);

enum class TopicScope {
  per_fold,  // fit on each training split, fold in the held-out documents
  global,    // fit once on every document
};

struct EvalParams {
  int folds = 10;
  bool stratify = true;
  std::uint64_t seed = 42;
  TrainParams logistic;
  int topics = 30;
  int top_k = 5;
  std::optional<double> lda_alpha;
  double lda_beta = 0.01;
  int lda_iterations = 1000;
  int infer_iterations = 100;
  std::size_t min_doc_freq = 2;
  TopicScope topic_scope = TopicScope::per_fold;
  VenueEncoding venue_encoding = VenueEncoding::index;
  SegmentOptions segment;
};

/// Fixed external resources. A supplied topic model replaces per-run fitting.
struct SuiteResources {
  const TaggerModel* tagger = nullptr;
  const TagSet* tagset = nullptr;
  const SentimentLexicon* lexicon = nullptr;
  const ArticleNetwork* network = nullptr;
  const TopicModel* topics = nullptr;
};

struct EvalRow {
  int config_id = 0;
  std::string description;
  std::optional<std::string> failure;
  std::size_t dimension = 0;
  Metrics metrics;
  Confusion pooled;
  std::vector<Confusion> folds;
};

struct SuiteReport {
  std::vector<EvalRow> rows;
  ImputationLog imputation;
  std::size_t readability_imputed = 0;
  VenueCodes venues;
};

/// Evaluates each config (in id order) by k-fold cross-validation. A config
/// whose resources are missing or whose training fails yields a FAILED row.
SuiteReport evaluate_suite(const Dataset& dataset, const std::vector<int>& config_ids, const EvalParams& params,
                           const SuiteResources& resources);

/// Single-config evaluation; rethrows the failure instead of marking the row.
EvalRow evaluate(const Dataset& dataset, const ModelConfig& config, const EvalParams& params,
                 const SuiteResources& resources);

/// Half-up rounding at `decimals` places.
double round_half_up(double value, int decimals);
/// A fraction as a percentage with two decimals, e.g. 0.546 -> "54.60".
std::string format_percent(double fraction);

/// `config accuracy f1_class1 f1_class2 f1 precision recall`, tab separated.
std::string format_report_tsv(const SuiteReport& report);
/// Aligned plain-text table with config descriptions.
std::string format_report_table(const SuiteReport& report, DocumentKind kind);

/// Run manifest as JSON: parameters, corpus checksum, venue table,
/// imputation counts and row failures, plus caller-supplied entries.
std::string manifest_json(const Dataset& dataset, const std::vector<int>& config_ids, const EvalParams& params,
                          const SuiteReport& report, const std::map<std::string, std::string>& extra = {});

/// Reads the parameter block of a manifest written by manifest_json.
EvalParams eval_params_from_manifest(const std::string& json_text);

/// Evaluates and writes report.tsv, report.txt and manifest.json into `out_dir`.
SuiteReport run_suite(const Dataset& dataset, const std::vector<int>& config_ids, const EvalParams& params,
                      const SuiteResources& resources, const std::filesystem::path& out_dir,
                      const std::map<std::string, std::string>& extra = {});

}  // namespace doqual
