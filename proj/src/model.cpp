#include "doqual/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doqual/error.hpp"

namespace doqual {

namespace {

constexpr std::string_view kModelMagic = "DOQUAL-LR-1";

// log(1 + e^t), stable for both signs.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

void check_inputs(const Eigen::MatrixXd& X, std::span<const int> y) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw DataError("feature matrix has " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) +
                    " labels were given");
  }
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (!std::isfinite(X(i, j))) {
        throw DataError("non-finite feature at row " + std::to_string(i) + ", column " + std::to_string(j));
      }
    }
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw DataError("label at row " + std::to_string(i) + " is not 0 or 1");
  }
}

Eigen::VectorXd label_vector(std::span<const int> y) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) out(static_cast<Eigen::Index>(i)) = y[i];
  return out;
}

double mean_nll(const Eigen::MatrixXd& X, const Eigen::VectorXd& yv, const Eigen::VectorXd& w, double b) {
  const Eigen::VectorXd t = (X * w).array() + b;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) loss += softplus(t(i)) - yv(i) * t(i);
  return loss / static_cast<double>(t.size());
}

double objective_impl(const Eigen::MatrixXd& X, const Eigen::VectorXd& yv, const Eigen::VectorXd& w, double b,
                      double ridge) {
  return mean_nll(X, yv, w, b) + ridge * w.squaredNorm();
}

}  // namespace

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double logistic_objective(const Eigen::MatrixXd& X, std::span<const int> y, const Eigen::VectorXd& w, double b,
                          double ridge) {
  check_inputs(X, y);
  return objective_impl(X, label_vector(y), w, b, ridge);
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, std::span<const int> y, const Eigen::VectorXd& w,
                                  double b, double ridge) {
  check_inputs(X, y);
  const Eigen::VectorXd yv = label_vector(y);
  const Eigen::VectorXd t = (X * w).array() + b;
  Eigen::VectorXd residual(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) residual(i) = logistic(t(i)) - yv(i);
  const double n = static_cast<double>(t.size());
  Eigen::VectorXd g(w.size() + 1);
  g.head(w.size()) = X.transpose() * residual / n + 2.0 * ridge * w;
  g(w.size()) = residual.sum() / n;
  return g;
}

LogisticModel train_logistic(const Eigen::MatrixXd& X_in, std::span<const int> y, const TrainParams& params,
                             std::vector<std::string> feature_names) {
  check_inputs(X_in, y);
  const Eigen::Index n = X_in.rows();
  const Eigen::Index d = X_in.cols();
  if (n < 2) throw TrainingError("logistic regression needs at least 2 rows");
  std::size_t positives = 0;
  for (int v : y) positives += static_cast<std::size_t>(v);
  if (positives == 0 || positives == y.size()) throw TrainingError("training labels contain a single class");
  if (!(params.ridge >= 0.0)) throw ParameterError("ridge must be non-negative");
  if (!feature_names.empty() && feature_names.size() != static_cast<std::size_t>(d)) {
    throw DataError("feature name count does not match the feature dimension");
  }
  if (feature_names.empty()) {
    for (Eigen::Index j = 0; j < d; ++j) feature_names.push_back("x" + std::to_string(j));
  }

  LogisticModel model;
  model.ridge_ = params.ridge;
  model.feature_names_ = std::move(feature_names);

  Eigen::MatrixXd X = X_in;
  if (params.standardize) {
    Standardization s;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double mean = X.col(j).mean();
      const double var = (X.col(j).array() - mean).square().mean();
      const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
      X.col(j) = (X.col(j).array() - mean) / sd;
      s.mean.push_back(mean);
      s.stddev.push_back(sd);
    }
    model.standardization_ = std::move(s);
  }

  // Columns are rescaled to unit max-magnitude for conditioning. With
  // w = v / scale the objective is unchanged; the ridge term becomes
  // sum ridge * v_j^2 / scale_j^2.
  Eigen::VectorXd col_scale(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double m = X.col(j).cwiseAbs().maxCoeff();
    col_scale(j) = m > 0.0 ? m : 1.0;
  }
  const Eigen::VectorXd penalty = params.ridge * col_scale.array().square().inverse();

  const Eigen::VectorXd yv = label_vector(y);
  const double nd = static_cast<double>(n);
  Eigen::MatrixXd Xa(n, d + 1);
  Xa.leftCols(d) = X * col_scale.cwiseInverse().asDiagonal();
  Xa.col(d).setOnes();
  const Eigen::MatrixXd Xs = Xa.leftCols(d);

  auto objective = [&](const Eigen::VectorXd& v, double bias) {
    return mean_nll(Xs, yv, v, bias) + (penalty.array() * v.array().square()).sum();
  };

  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  double f = objective(v, b);
  model.objective_trace_.push_back(f);

  int iter = 0;
  bool converged = false;
  for (; iter < params.max_iter; ++iter) {
    const Eigen::VectorXd t = (Xs * v).array() + b;
    Eigen::VectorXd residual(n), curvature(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = logistic(t(i));
      residual(i) = p - yv(i);
      curvature(i) = p * (1.0 - p);
    }
    Eigen::VectorXd g = Xa.transpose() * residual / nd;
    g.head(d).array() += 2.0 * penalty.array() * v.array();
    if (g.norm() == 0.0) {
      converged = true;
      break;
    }
    Eigen::MatrixXd H = Xa.transpose() * curvature.asDiagonal() * Xa / nd;
    H.diagonal().head(d) += 2.0 * penalty;

    // Levenberg-style jitter until the system is positive definite.
    Eigen::VectorXd step;
    double jitter = 0.0;
    const double scale = std::max(H.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    for (int attempt = 0; attempt < 30; ++attempt) {
      Eigen::MatrixXd Hj = H;
      Hj.diagonal().array() += jitter;
      Eigen::LLT<Eigen::MatrixXd> llt(Hj);
      if (llt.info() == Eigen::Success) {
        step = -llt.solve(g);
        if (step.allFinite() && g.dot(step) < 0.0) break;
      }
      step.resize(0);
      jitter = jitter == 0.0 ? scale * 1e-12 : jitter * 10.0;
    }
    if (step.size() == 0) step = -g;

    // Backtracking (Armijo) line search keeps every accepted step a descent.
    const double slope = g.dot(step);
    double alpha = 1.0;
    double f_new = f;
    Eigen::VectorXd v_new;
    double b_new = b;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      v_new = v + alpha * step.head(d);
      b_new = b + alpha * step(d);
      f_new = objective(v_new, b_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      converged = true;
      break;
    }
    const double change = std::abs(f - f_new) / std::max(std::abs(f), 1e-300);
    v = std::move(v_new);
    b = b_new;
    f = f_new;
    model.objective_trace_.push_back(f);
    if (change < params.tol) {
      ++iter;
      converged = true;
      break;
    }
  }

  const Eigen::VectorXd w = v.cwiseQuotient(col_scale);
  model.weights_.assign(w.data(), w.data() + d);
  model.bias_ = b;
  model.iterations_ = iter;
  model.converged_ = converged;
  return model;
}

double LogisticModel::decision(std::span<const double> x) const {
  if (x.size() != weights_.size()) {
    throw DataError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                    std::to_string(weights_.size()));
  }
  double t = bias_;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double v = x[j];
    if (standardization_) v = (v - standardization_->mean[j]) / standardization_->stddev[j];
    t += weights_[j] * v;
  }
  return t;
}

std::string LogisticModel::serialize() const {
  std::ostringstream out;
  char buf[40];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << kModelMagic << '\n';
  out << "features " << weights_.size() << '\n';
  for (std::size_t j = 0; j < weights_.size(); ++j) out << feature_names_[j] << '\t' << num(weights_[j]) << '\n';
  out << "bias " << num(bias_) << '\n';
  out << "ridge " << num(ridge_) << '\n';
  out << "standardization " << (standardization_ ? 1 : 0) << '\n';
  if (standardization_) {
    for (std::size_t j = 0; j < weights_.size(); ++j) {
      out << num(standardization_->mean[j]) << '\t' << num(standardization_->stddev[j]) << '\n';
    }
  }
  return out.str();
}

LogisticModel LogisticModel::deserialize(std::string_view content) {
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t ln = 0;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError("<logistic>", ln + 1, std::string("missing ") + what);
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto keyed = [&](const char* key) {
    std::istringstream fields(next(key));
    std::string name, value;
    if (!(fields >> name >> value) || name != key) throw ParseError("<logistic>", ln, std::string("expected ") + key);
    return value;
  };
  if (next("magic") != kModelMagic) throw ParseError("<logistic>", 1, "not a DOQUAL-LR-1 model");
  LogisticModel m;
  try {
    const auto d = static_cast<std::size_t>(std::stoull(keyed("features")));
    for (std::size_t j = 0; j < d; ++j) {
      const auto row = next("weight row");
      const auto tab = row.rfind('\t');
      if (tab == std::string::npos) throw ParseError("<logistic>", ln, "expected name<TAB>weight");
      m.feature_names_.push_back(row.substr(0, tab));
      m.weights_.push_back(std::stod(row.substr(tab + 1)));
    }
    m.bias_ = std::stod(keyed("bias"));
    m.ridge_ = std::stod(keyed("ridge"));
    if (keyed("standardization") != "0") {
      Standardization s;
      for (std::size_t j = 0; j < d; ++j) {
        std::istringstream row(next("standardization row"));
        double mean, sd;
        if (!(row >> mean >> sd) || !(sd > 0.0)) throw ParseError("<logistic>", ln, "bad standardization row");
        s.mean.push_back(mean);
        s.stddev.push_back(sd);
      }
      m.standardization_ = std::move(s);
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("<logistic>", ln, "bad numeric field");
  } catch (const std::out_of_range&) {
    throw ParseError("<logistic>", ln, "numeric field out of range");
  }
  m.converged_ = true;
  return m;
}

void LogisticModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize();
}

LogisticModel LogisticModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace doqual
