#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "doqual/error.hpp"
#include "doqual/model.hpp"

using namespace doqual;

namespace {

struct Problem {
  Eigen::MatrixXd X;
  std::vector<int> y;
};

Problem random_problem(Rng& rng, Eigen::Index n, Eigen::Index d) {
  Problem p{Eigen::MatrixXd(n, d), std::vector<int>(static_cast<std::size_t>(n))};
  for (Eigen::Index i = 0; i < n; ++i) {
    double t = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      p.X(i, j) = 4.0 * rng.uniform() - 2.0;
      t += (j % 2 ? -1.0 : 1.0) * p.X(i, j);
    }
    p.y[static_cast<std::size_t>(i)] = rng.uniform() < logistic(t) ? 1 : 0;
  }
  p.y[0] = 0;
  p.y[1] = 1;
  return p;
}

std::vector<std::vector<double>> rows(const Eigen::MatrixXd& X) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(X(i, j));
  }
  return out;
}

}  // namespace

TEST_CASE("logistic function identities") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(logistic(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
  for (double t : {1.0, 10.0, 100.0}) {
    CHECK(logistic(t) + logistic(-t) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(logistic(-800.0) == 0.0);
  CHECK(logistic(800.0) == 1.0);
  CHECK(std::isfinite(logistic(-1e308)));
}

TEST_CASE("objective matches a direct evaluation and the gradient matches finite differences") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng.below(19));
    const auto d = static_cast<Eigen::Index>(1 + rng.below(5));
    const auto p = random_problem(rng, n, d);
    const double ridge = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    std::vector<double> theta(static_cast<std::size_t>(d + 1));
    for (auto& v : theta) v = 2.0 * rng.uniform() - 1.0;
    const auto data = rows(p.X);
    auto f = [&](const std::vector<double>& th) {
      return oracle::reference_objective(data, p.y, {th.begin(), th.end() - 1}, th.back(), ridge);
    };
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(theta.data(), d);
    CHECK(logistic_objective(p.X, p.y, w, theta.back(), ridge) == doctest::Approx(f(theta)).epsilon(1e-12));
    const auto fd = oracle::finite_difference(f, theta);
    const auto g = logistic_gradient(p.X, p.y, w, theta.back(), ridge);
    for (std::size_t k = 0; k < fd.size(); ++k) {
      const double scale = std::max(1.0, std::abs(fd[k]));
      CHECK(std::abs(g(static_cast<Eigen::Index>(k)) - fd[k]) / scale < 1e-5);
    }
  }
}

TEST_CASE("separable one-dimensional data is fitted perfectly") {
  Eigen::MatrixXd X(200, 1);
  std::vector<int> y(200);
  for (int i = 0; i < 200; ++i) {
    X(i, 0) = i < 100 ? -1.0 : 1.0;
    y[static_cast<std::size_t>(i)] = i < 100 ? 0 : 1;
  }
  const auto m = train_logistic(X, y);
  CHECK(m.iterations() <= 500);
  for (int i = 0; i < 200; ++i) {
    const double x = X(i, 0);
    CHECK(m.classify(std::span(&x, 1)) == y[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("mirrored two-point data puts the boundary through the origin") {
  Eigen::MatrixXd X(2, 2);
  X << 1.0, -2.0, -1.0, 2.0;
  const std::vector<int> y{1, 0};
  TrainParams params;
  params.ridge = 1e-3;
  const auto m = train_logistic(X, y, params);
  for (double w : m.weights()) CHECK(std::isfinite(w));
  CHECK(std::abs(m.bias()) < 1e-9);
  const std::vector<double> a{1.0, -2.0}, b{-1.0, 2.0};
  CHECK(m.predict_proba(a) + m.predict_proba(b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("returned weights satisfy first-order optimality") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_problem(rng, 60, 4);
    TrainParams params;
    params.ridge = trial % 2 ? 1e-8 : 1e-2;
    const auto m = train_logistic(p.X, p.y, params);
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(m.weights().data(), 4);
    const double obj = logistic_objective(p.X, p.y, w, m.bias(), params.ridge);
    const double gnorm = logistic_gradient(p.X, p.y, w, m.bias(), params.ridge).norm();
    CHECK(gnorm < 10.0 * params.tol * (1.0 + std::abs(obj)));
    CHECK(m.converged());
  }
}

TEST_CASE("objective never increases across accepted iterations") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_problem(rng, 40, 3);
    const auto m = train_logistic(p.X, p.y);
    const auto& trace = m.objective_trace();
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
  }
}

TEST_CASE("a huge ridge collapses to the bias-only prior") {
  Rng rng(4);
  const auto p = random_problem(rng, 50, 3);
  TrainParams params;
  params.ridge = 1e9;
  const auto m = train_logistic(p.X, p.y, params);
  double positives = 0.0;
  for (int v : p.y) positives += v;
  const double prior = positives / 50.0;
  for (double w : m.weights()) CHECK(std::abs(w) < 1e-8);
  for (Eigen::Index i = 0; i < 50; ++i) {
    const Eigen::RowVectorXd row = p.X.row(i);
    CHECK(m.predict_proba(std::span(row.data(), 3)) == doctest::Approx(prior).epsilon(1e-6));
  }
}

TEST_CASE("row order does not change the fit") {
  Rng rng(21);
  const auto p = random_problem(rng, 80, 3);
  std::vector<std::size_t> order(80);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  Eigen::MatrixXd Xp(80, 3);
  std::vector<int> yp(80);
  for (std::size_t i = 0; i < 80; ++i) {
    Xp.row(static_cast<Eigen::Index>(i)) = p.X.row(static_cast<Eigen::Index>(order[i]));
    yp[i] = p.y[order[i]];
  }
  const auto a = train_logistic(p.X, p.y);
  const auto b = train_logistic(Xp, yp);
  for (std::size_t j = 0; j < 3; ++j) CHECK(a.weights()[j] == doctest::Approx(b.weights()[j]).epsilon(1e-9));
  CHECK(a.bias() == doctest::Approx(b.bias()).epsilon(1e-9));
}

TEST_CASE("unscaled columns still train") {
  Rng rng(2);
  Eigen::MatrixXd X(100, 2);
  std::vector<int> y(100);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const double f = std::exp(6.0 + 3.0 * rng.uniform());
    X(i, 0) = f;
    X(i, 1) = rng.uniform();
    y[static_cast<std::size_t>(i)] = std::log(f) > 7.5 ? 1 : 0;
  }
  const auto m = train_logistic(X, y);
  int right = 0;
  for (Eigen::Index i = 0; i < 100; ++i) {
    const Eigen::RowVectorXd row = X.row(i);
    right += m.classify(std::span(row.data(), 2)) == y[static_cast<std::size_t>(i)];
  }
  CHECK(right >= 95);
}

TEST_CASE("training errors") {
  Eigen::MatrixXd X(3, 1);
  X << 1, 2, 3;
  CHECK_THROWS_AS(train_logistic(X, std::vector<int>{1, 1, 1}), TrainingError);
  CHECK_THROWS_AS(train_logistic(X, std::vector<int>{0, 1}), DataError);
  CHECK_THROWS_AS(train_logistic(X, std::vector<int>{0, 2, 1}), DataError);
  X(1, 0) = std::nan("");
  try {
    train_logistic(X, std::vector<int>{0, 1, 1});
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 1, column 0") != std::string::npos);
  }
}

TEST_CASE("prediction conventions") {
  Eigen::MatrixXd X(4, 1);
  X << -1, -1, 1, 1;
  const auto m = train_logistic(X, std::vector<int>{0, 1, 0, 1});
  const double zero = 0.0;
  CHECK(m.predict_proba(std::span(&zero, 1)) == doctest::Approx(0.5));
  const std::vector<double> wrong(2, 0.0);
  CHECK_THROWS_AS(m.decision(wrong), DataError);
}

TEST_CASE("model serialization round-trips") {
  Rng rng(6);
  const auto p = random_problem(rng, 30, 2);
  TrainParams params;
  params.standardize = true;
  const auto m = train_logistic(p.X, p.y, params, {"alpha", "beta"});
  const auto back = LogisticModel::deserialize(m.serialize());
  CHECK(back.serialize() == m.serialize());
  CHECK(back.weights() == m.weights());
  CHECK(back.feature_names() == std::vector<std::string>{"alpha", "beta"});
  REQUIRE(back.standardization().has_value());
  const std::vector<double> x{0.3, -0.7};
  CHECK(back.predict_proba(x) == m.predict_proba(x));
  CHECK_THROWS_AS(LogisticModel::deserialize("DOQUAL-LR-0\n"), ParseError);
}
