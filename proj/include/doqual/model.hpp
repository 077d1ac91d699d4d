#pragma once

// L2-regularized binary logistic regression.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace doqual {

/// F(t) = 1 / (1 + e^-t), evaluated without overflow for large |t|.
double logistic(double t);

struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;  // zero-variance columns get 1
};

struct TrainParams {
  double ridge = 1e-8;
  double tol = 1e-8;
  int max_iter = 500;
  bool standardize = false;
};

class LogisticModel {
 public:
  LogisticModel() = default;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  double ridge() const { return ridge_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::optional<Standardization>& standardization() const { return standardization_; }
  std::size_t dimension() const { return weights_.size(); }
  int iterations() const { return iterations_; }
  bool converged() const { return converged_; }
  /// Objective at the start and after every accepted step. Not persisted.
  const std::vector<double>& objective_trace() const { return objective_trace_; }

  /// Linear response w.x + b on (optionally standardized) features.
  double decision(std::span<const double> x) const;
  /// Throws DataError on a dimension mismatch.
  double predict_proba(std::span<const double> x) const { return logistic(decision(x)); }
  /// 1 (positive class) when the probability exceeds 0.5, else 0.
  int classify(std::span<const double> x) const { return predict_proba(x) > 0.5 ? 1 : 0; }

  std::string serialize() const;
  static LogisticModel deserialize(std::string_view content);
  void save(const std::filesystem::path& path) const;
  static LogisticModel load(const std::filesystem::path& path);

  friend LogisticModel train_logistic(const Eigen::MatrixXd& X, std::span<const int> y,
                                      const TrainParams& params, std::vector<std::string> feature_names);

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  double ridge_ = 0.0;
  std::vector<std::string> feature_names_;
  std::optional<Standardization> standardization_;
  int iterations_ = 0;
  bool converged_ = false;
  std::vector<double> objective_trace_;
};

/// Minimizes mean negative log-likelihood + ridge * |w|^2 (bias unpenalized)
/// by damped Newton iterations from zero. `y` holds 0/1 labels.
/// Throws TrainingError for a single-class target and DataError for
/// non-finite features or mismatched shapes.
LogisticModel train_logistic(const Eigen::MatrixXd& X, std::span<const int> y, const TrainParams& params = {},
                             std::vector<std::string> feature_names = {});

/// The training objective at (w, b). Exposed for optimality checks.
double logistic_objective(const Eigen::MatrixXd& X, std::span<const int> y, const Eigen::VectorXd& w, double b,
                          double ridge);

/// Gradient of logistic_objective; the last entry is d/db.
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, std::span<const int> y, const Eigen::VectorXd& w,
                                  double b, double ridge);

}  // namespace doqual
