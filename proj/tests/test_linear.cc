// Copyright 2026 The amimort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "amimort/error.h"
#include "amimort/linear.h"
#include "amimort/metrics.h"
#include "synthetic.h"

using namespace amimort;

namespace {

double penalized_log_likelihood(const DesignMatrix& x, double b0, const std::vector<double>& w, double l2) {
  double ll = 0.0;
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    double z = b0;
    for (std::size_t c = 0; c < x.n_cols(); ++c) z += w[c] * x(r, c);
    ll += x.labels[r] * z - (std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))));
  }
  double sq = 0.0;
  for (double v : w) sq += v * v;
  return ll - 0.5 * l2 * sq;
}

DesignMatrix affine(const DesignMatrix& x, const std::vector<double>& shift, const std::vector<double>& scale) {
  DesignMatrix y = x;
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    for (std::size_t c = 0; c < x.n_cols(); ++c) y.values[r * x.n_cols() + c] = x(r, c) * scale[c] + shift[c];
  }
  return y;
}

}  // namespace

TEST_CASE("validation and single-class input") {
  LogisticParams p;
  p.convergence_tol = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.l2_strength = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  const auto x = DesignMatrix::from_rows({"a"}, {{1}, {2}}, {0, 0});
  CHECK_THROWS_AS(fit_logistic(x, {}), TrainingError);
}

TEST_CASE("intercept-only fit recovers the log-odds of the base rate") {
  std::vector<std::vector<double>> rows(139);
  std::vector<int> labels(139, 0);
  for (std::size_t i = 0; i < 87; ++i) labels[i] = 1;
  const auto x = DesignMatrix::from_rows({}, rows, labels);
  const auto m = fit_logistic(x, {});
  const auto& c = m.as<LogisticComponents>();
  CHECK(c.converged);
  CHECK(c.coefficients.empty());
  CHECK(c.intercept == doctest::Approx(0.514664400073156363690565584803).epsilon(1e-12));
}

TEST_CASE("an all-zero feature on balanced data gets a zero coefficient") {
  const auto x = DesignMatrix::from_rows({"zero", "x"}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 2.5}, {0, 1.5}},
                                         {0, 1, 0, 1, 1, 0});
  const auto m = fit_logistic(x, {});
  const auto& c = m.as<LogisticComponents>();
  CHECK(c.converged);
  CHECK(std::abs(c.coefficients[0]) < 1e-12);
}

TEST_CASE("separable data without a penalty does not converge") {
  const auto x = DesignMatrix::from_rows({"x"}, {{1}, {2}, {3}, {4}}, {0, 0, 1, 1});
  LogisticParams p;
  p.l2_strength = 0.0;
  p.max_iterations = 50;
  const auto m = fit_logistic(x, p);
  const auto& c = m.as<LogisticComponents>();
  CHECK_FALSE(c.converged);
  CHECK(c.iterations <= 50);
  CHECK_FALSE(m.warnings().empty());
  CHECK(std::isfinite(c.coefficients[0]));
  CHECK(c.coefficients[0] > 0.0);
}

TEST_CASE("null model and monotone scoring") {
  const TrainedModel null({"a", "b"}, LogisticComponents{0.0, {0.0, 0.0}, true, 0}, {});
  for (const std::vector<double>& row : {std::vector<double>{1, 2}, std::vector<double>{-3, 0}}) {
    CHECK(null.score(row) == 0.5);
  }
  const TrainedModel m({"a", "b"}, LogisticComponents{0.2, {1.5, -0.5}, true, 0}, {});
  double prev = 0.0;
  for (double a = -5; a <= 5; a += 0.5) {
    const std::vector<double> row = {a, 1.0};
    const double s = m.score(row);
    CHECK(s > prev);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    prev = s;
  }
}

TEST_CASE("fitted optimum is stationary and matches finite differences") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = testing::random_matrix(rng, 40 + uniform_index(rng, 60), 1 + uniform_index(rng, 5));
    LogisticParams p;
    p.l2_strength = trial % 3 == 0 ? 0.1 : 1.0;
    const auto m = fit_logistic(x, p);
    const auto& c = m.as<LogisticComponents>();
    REQUIRE(c.converged);
    const auto g = logistic_gradient(x, c.intercept, c.coefficients, p.l2_strength);
    for (double v : g) CHECK(std::abs(v) < 10 * p.convergence_tol);

    // Finite differences of the penalized likelihood agree with the
    // analytic gradient at the optimum and at a perturbed point.
    std::vector<double> w = c.coefficients;
    for (auto& v : w) v += 0.3;
    const double b0 = c.intercept - 0.2;
    const auto ga = logistic_gradient(x, b0, w, p.l2_strength);
    const double h = 1e-5;
    const double d0 = (penalized_log_likelihood(x, b0 + h, w, p.l2_strength) -
                       penalized_log_likelihood(x, b0 - h, w, p.l2_strength)) / (2 * h);
    CHECK(std::abs(d0 - ga[0]) < 1e-4);
    for (std::size_t j = 0; j < w.size(); ++j) {
      auto up = w, down = w;
      up[j] += h;
      down[j] -= h;
      const double dj = (penalized_log_likelihood(x, b0, up, p.l2_strength) -
                         penalized_log_likelihood(x, b0, down, p.l2_strength)) / (2 * h);
      CHECK(std::abs(dj - ga[j + 1]) < 1e-4);
    }
  }
}

TEST_CASE("fitting is deterministic") {
  Rng rng(3);
  const auto x = testing::random_matrix(rng, 80, 4);
  CHECK(fit_logistic(x, {}) == fit_logistic(x, {}));
}

TEST_CASE("unpenalized AUC is invariant to affine feature maps") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto train = testing::random_matrix(rng, 120, 3);
    const auto test = testing::random_matrix(rng, 40, 3);
    std::vector<double> shift(3), scale(3);
    for (std::size_t c = 0; c < 3; ++c) {
      shift[c] = testing::normal(rng) * 5;
      scale[c] = 0.2 + uniform_real(rng) * 4;
    }
    LogisticParams p;
    p.l2_strength = 0.0;
    const auto a = fit_logistic(train, p);
    const auto b = fit_logistic(affine(train, shift, scale), p);
    const double auc_a = auc(a.predict_proba(test), test.labels);
    const double auc_b = auc(b.predict_proba(affine(test, shift, scale)), test.labels);
    CHECK(std::abs(auc_a - auc_b) < 1e-9);
  }
}
